#pragma once

// RV32I base instruction set: mnemonics, formats, binary encode/decode.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "rv32sc/types.hpp"

namespace rv32sc::isa {

enum class Mnemonic : std::uint8_t {
    Add, Addi, Sub,
    Sll, Slli, Srl, Srli, Sra, Srai,
    And, Andi, Or, Ori, Xor, Xori,
    Slt, Slti, Sltu, Sltiu,
    Lui, Auipc,
    Beq, Bne, Blt, Bltu, Bge, Bgeu,
    Jal, Jalr,
    Lb, Lbu, Lh, Lhu, Lw,
    Sb, Sh, Sw,
    Fence, Ecall, Ebreak,
};

inline constexpr std::size_t kNumMnemonics = 40;

enum class Format : std::uint8_t { R, I, S, B, U, J };

std::array<Mnemonic, kNumMnemonics> const& all_mnemonics();

std::string_view name_of(Mnemonic m);
std::optional<Mnemonic> mnemonic_from_name(std::string_view name);
Format format_of(Mnemonic m);
char format_letter(Format f);

constexpr bool is_shift_imm(Mnemonic m) {
    return m == Mnemonic::Slli || m == Mnemonic::Srli || m == Mnemonic::Srai;
}
constexpr bool is_load(Mnemonic m) {
    return m == Mnemonic::Lb || m == Mnemonic::Lbu || m == Mnemonic::Lh || m == Mnemonic::Lhu ||
           m == Mnemonic::Lw;
}
constexpr bool is_store(Mnemonic m) {
    return m == Mnemonic::Sb || m == Mnemonic::Sh || m == Mnemonic::Sw;
}
constexpr bool is_branch(Mnemonic m) {
    return m == Mnemonic::Beq || m == Mnemonic::Bne || m == Mnemonic::Blt || m == Mnemonic::Bltu ||
           m == Mnemonic::Bge || m == Mnemonic::Bgeu;
}
constexpr bool is_system(Mnemonic m) { return m == Mnemonic::Ecall || m == Mnemonic::Ebreak; }

// Decoded instruction. Fields the format does not use are zero and imm is
// already sign-extended; shift-immediates carry the bare shift amount and
// fence carries its pred/succ byte.
struct Instruction {
    Mnemonic mnemonic = Mnemonic::Addi;
    std::uint8_t rd = 0;
    std::uint8_t rs1 = 0;
    std::uint8_t rs2 = 0;
    SWord imm = 0;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

class IsaError : public std::runtime_error {
public:
    enum class Kind { IllegalInstruction, ImmediateRange, FieldRange };

    IsaError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

// Signed range of the immediate operand for a format, inclusive.
struct ImmRange {
    SWord min;
    SWord max;
};
ImmRange imm_range(Mnemonic m);

std::optional<Instruction> try_decode(Word w);

// Throws IsaError{IllegalInstruction} on any word matching no supported encoding.
Instruction decode(Word w);

// Throws IsaError{ImmediateRange} or IsaError{FieldRange}.
Word encode(const Instruction& i);

namespace opcode {
inline constexpr Word kLoad = 0x03;
inline constexpr Word kMiscMem = 0x0F;
inline constexpr Word kOpImm = 0x13;
inline constexpr Word kAuipc = 0x17;
inline constexpr Word kStore = 0x23;
inline constexpr Word kOp = 0x33;
inline constexpr Word kLui = 0x37;
inline constexpr Word kBranch = 0x63;
inline constexpr Word kJalr = 0x67;
inline constexpr Word kJal = 0x6F;
inline constexpr Word kSystem = 0x73;
}  // namespace opcode

}  // namespace rv32sc::isa
