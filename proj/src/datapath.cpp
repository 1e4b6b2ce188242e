#include "rv32sc/datapath.hpp"

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

#include "rv32sc/bits.hpp"

namespace rv32sc {

std::string_view to_string(TrapKind k) {
    switch (k) {
        case TrapKind::Ecall: return "ECALL";
        case TrapKind::Ebreak: return "EBREAK";
        case TrapKind::IllegalInstruction: return "ILLEGAL_INSTRUCTION";
        case TrapKind::MisalignedAccess: return "MISALIGNED_ACCESS";
        case TrapKind::MisalignedTarget: return "MISALIGNED_TARGET";
        case TrapKind::AccessOutOfRange: return "ACCESS_OUT_OF_RANGE";
        case TrapKind::FetchOutOfRange: return "FETCH_OUT_OF_RANGE";
    }
    return "?";
}

TrapError::TrapError(TrapKind kind) : std::runtime_error(std::string(to_string(kind))), kind_(kind) {}

}  // namespace rv32sc

namespace rv32sc::datapath {

using control::MemWidth;

std::uint64_t fnv1a(std::span<const std::uint8_t> data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto b : data) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

void RegisterFile::write(unsigned a3, Word wd, bool we) {
    if (a3 >= kNumRegisters) throw std::out_of_range("register index out of range");
    if (we && a3 != 0) regs_[a3] = wd;
}

InstructionMemory::InstructionMemory(Word base, std::vector<Word> words)
    : base_(base), words_(std::move(words)) {
    if (base_ % 4 != 0) throw std::invalid_argument("instruction memory base must be word-aligned");
}

Word InstructionMemory::fetch(Word pc) const {
    if (pc < base_ || pc % 4 != 0) throw TrapError(TrapKind::FetchOutOfRange);
    const Word index = (pc - base_) / 4;
    if (index >= words_.size()) throw TrapError(TrapKind::FetchOutOfRange);
    return words_[index];
}

std::uint64_t InstructionMemory::digest() const {
    std::vector<std::uint8_t> le;
    le.reserve(words_.size() * 4 + 4);
    for (const Word w : words_) {
        for (unsigned b = 0; b < 4; ++b) le.push_back(static_cast<std::uint8_t>(w >> (8 * b)));
    }
    for (unsigned b = 0; b < 4; ++b) le.push_back(static_cast<std::uint8_t>(base_ >> (8 * b)));
    return fnv1a(le);
}

DataMemory::DataMemory(Word size_bytes, Word display_addr)
    : bytes_(size_bytes, 0), display_addr_(display_addr) {
    if (size_bytes == 0 || !std::has_single_bit(size_bytes)) {
        throw std::invalid_argument(fmt::format("data memory size {} is not a power of two", size_bytes));
    }
    if (display_addr % 4 != 0) {
        throw std::invalid_argument(fmt::format("display address 0x{:08x} is not word-aligned", display_addr));
    }
}

AccessResult DataMemory::access(Word addr, Word wd, MemWidth width, bool is_unsigned, bool read,
                                bool write) {
    if (read && write) throw std::logic_error("data memory has a single port");
    if (!read && !write) return {};

    const unsigned n = control::width_bytes(width);
    if (addr % n != 0) throw TrapError(TrapKind::MisalignedAccess);

    // Aligned accesses never straddle a word, so the access is wholly inside
    // the latch or wholly outside it.
    const bool to_latch = (addr & ~3u) == display_addr_;
    if (!to_latch && (addr >= bytes_.size() || bytes_.size() - addr < n)) {
        throw TrapError(TrapKind::AccessOutOfRange);
    }

    auto byte_ref = [&](unsigned i) -> std::uint8_t {
        if (to_latch) return static_cast<std::uint8_t>(output_latch_ >> (8 * ((addr + i) & 3u)));
        return bytes_[addr + i];
    };

    AccessResult result;
    if (read) {
        Word raw = 0;
        for (unsigned i = 0; i < n; ++i) raw |= Word{byte_ref(i)} << (8 * i);
        const auto v = bits::BitVec(raw, 8 * n);
        result.rd = (is_unsigned ? bits::zero_extend(v, 32) : bits::sign_extend(v, 32)).value();
        return result;
    }

    for (unsigned i = 0; i < n; ++i) {
        const auto b = static_cast<std::uint8_t>(wd >> (8 * i));
        if (to_latch) {
            const unsigned shift = 8 * ((addr + i) & 3u);
            output_latch_ = (output_latch_ & ~(0xFFu << shift)) | (Word{b} << shift);
        } else {
            bytes_[addr + i] = b;
        }
    }
    result.output_enable = to_latch;
    return result;
}

void DataMemory::load_words(Word origin, std::span<const Word> words) {
    if (origin % 4 != 0) throw std::invalid_argument("data image origin must be word-aligned");
    if (origin > bytes_.size() || (bytes_.size() - origin) / 4 < words.size()) {
        throw std::invalid_argument(fmt::format("data image of {} words at 0x{:08x} exceeds {} bytes of memory",
                                                words.size(), origin, bytes_.size()));
    }
    for (std::size_t i = 0; i < words.size(); ++i) {
        for (unsigned b = 0; b < 4; ++b) {
            bytes_[origin + 4 * i + b] = static_cast<std::uint8_t>(words[i] >> (8 * b));
        }
    }
}

std::uint64_t DataMemory::digest() const {
    std::uint64_t h = fnv1a(bytes_);
    return h ^ (std::uint64_t{output_latch_} * 0x9E3779B97F4A7C15ull);
}

bool branch_taken(control::BranchKind kind, const alu::AluResult& flags) {
    using control::BranchKind;
    switch (kind) {
        case BranchKind::Beq: return flags.eq;
        case BranchKind::Bne: return !flags.eq;
        case BranchKind::Blt: return flags.lt_signed;
        case BranchKind::Bge: return !flags.lt_signed;
        case BranchKind::Bltu: return flags.lt_unsigned;
        case BranchKind::Bgeu: return !flags.lt_unsigned;
        case BranchKind::Jal:
        case BranchKind::Jalr: return true;
        case BranchKind::None: return false;
    }
    return false;
}

namespace {

// The PC has its own adders, separate from the ALU.
Word pc_add(Word a, Word b) { return bits::cla_add(bits::BitVec(a, 32), bits::BitVec(b, 32), false).sum.value(); }

}  // namespace

Word pc_next(Word pc, const control::ControlSignals& sig, const alu::AluResult& flags, Word imm,
             Word rs1val) {
    using control::PcSrc;
    Word next = 0;
    switch (sig.pc_src) {
        case PcSrc::Plus4:
            next = pc_add(pc, 4);
            break;
        case PcSrc::BranchTarget:
            next = branch_taken(sig.branch_kind, flags) ? pc_add(pc, imm) : pc_add(pc, 4);
            break;
        case PcSrc::JumpTarget:
            next = pc_add(pc, imm);
            break;
        case PcSrc::JalrTarget:
            next = pc_add(rs1val, imm) & ~1u;
            break;
    }
    if (next % 4 != 0) throw TrapError(TrapKind::MisalignedTarget);
    return next;
}

}  // namespace rv32sc::datapath
