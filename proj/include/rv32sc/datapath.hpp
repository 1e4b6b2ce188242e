#pragma once

// Stateful datapath components: register file, program counter logic,
// instruction memory and data memory with the display output latch.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "rv32sc/alu.hpp"
#include "rv32sc/control.hpp"
#include "rv32sc/types.hpp"

namespace rv32sc::datapath {

inline constexpr Word kDefaultImemBytes = 4096;
inline constexpr Word kDefaultDmemBytes = 4096;
inline constexpr Word kDefaultDisplayAddr = 0x00000FFC;

// 32 x 32-bit, two read ports and one write port. x0 reads as zero and
// ignores writes.
class RegisterFile {
public:
    struct ReadPorts {
        Word rd1;
        Word rd2;
    };

    ReadPorts read(unsigned a1, unsigned a2) const { return {at(a1), at(a2)}; }
    void write(unsigned a3, Word wd, bool we);

    Word at(unsigned index) const { return regs_.at(index); }
    const std::array<Word, kNumRegisters>& values() const { return regs_; }

    friend bool operator==(const RegisterFile&, const RegisterFile&) = default;

private:
    std::array<Word, kNumRegisters> regs_{};
};

// Read-only word store. Addresses below base or past the last word raise
// FetchOutOfRange.
class InstructionMemory {
public:
    InstructionMemory() = default;
    InstructionMemory(Word base, std::vector<Word> words);

    Word fetch(Word pc) const;

    Word base() const { return base_; }
    std::span<const Word> words() const { return words_; }
    std::uint64_t digest() const;

    friend bool operator==(const InstructionMemory&, const InstructionMemory&) = default;

private:
    Word base_ = 0;
    std::vector<Word> words_;
};

struct AccessResult {
    Word rd = 0;
    bool output_enable = false;
};

// Byte-addressed little-endian RAM, addresses 0..size-1, plus a one-word
// output latch at display_addr. The latch shadows RAM for accesses inside its
// word, so display_addr may lie inside or outside the RAM range.
class DataMemory {
public:
    DataMemory() : DataMemory(kDefaultDmemBytes, kDefaultDisplayAddr) {}
    // Throws std::invalid_argument unless size is a power of two and
    // display_addr is word-aligned.
    DataMemory(Word size_bytes, Word display_addr);

    // Single read/write port. Misalignment is checked before range.
    AccessResult access(Word addr, Word wd, control::MemWidth width, bool is_unsigned, bool read,
                        bool write);

    // Places words little-endian starting at byte address origin.
    void load_words(Word origin, std::span<const Word> words);

    Word size_bytes() const { return static_cast<Word>(bytes_.size()); }
    Word display_addr() const { return display_addr_; }
    Word output_latch() const { return output_latch_; }
    void set_output_latch(Word v) { output_latch_ = v; }

    std::span<const std::uint8_t> bytes() const { return bytes_; }
    std::span<std::uint8_t> bytes() { return bytes_; }

    std::uint64_t digest() const;

    friend bool operator==(const DataMemory&, const DataMemory&) = default;

private:
    std::vector<std::uint8_t> bytes_;
    Word display_addr_;
    Word output_latch_ = 0;
};

// Next-PC selection. Throws TrapError{MisalignedTarget} when the selected
// address has either of its low two bits set.
Word pc_next(Word pc, const control::ControlSignals& sig, const alu::AluResult& flags, Word imm,
             Word rs1val);

bool branch_taken(control::BranchKind kind, const alu::AluResult& flags);

std::uint64_t fnv1a(std::span<const std::uint8_t> data);

}  // namespace rv32sc::datapath
