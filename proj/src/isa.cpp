#include "rv32sc/isa.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "rv32sc/bits.hpp"

namespace rv32sc::isa {

namespace {

constexpr int kAny = -1;

struct EncodingRow {
    Mnemonic mnemonic;
    std::string_view name;
    Format format;
    Word opcode;
    int funct3;  // kAny when the format has no funct3 (U, J)
    int funct7;  // kAny when bits 31..25 belong to the immediate
};

// Ordered to match the Mnemonic enumeration.
constexpr std::array<EncodingRow, kNumMnemonics> kTable{{
    {Mnemonic::Add, "add", Format::R, opcode::kOp, 0b000, 0x00},
    {Mnemonic::Addi, "addi", Format::I, opcode::kOpImm, 0b000, kAny},
    {Mnemonic::Sub, "sub", Format::R, opcode::kOp, 0b000, 0x20},
    {Mnemonic::Sll, "sll", Format::R, opcode::kOp, 0b001, 0x00},
    {Mnemonic::Slli, "slli", Format::I, opcode::kOpImm, 0b001, 0x00},
    {Mnemonic::Srl, "srl", Format::R, opcode::kOp, 0b101, 0x00},
    {Mnemonic::Srli, "srli", Format::I, opcode::kOpImm, 0b101, 0x00},
    {Mnemonic::Sra, "sra", Format::R, opcode::kOp, 0b101, 0x20},
    {Mnemonic::Srai, "srai", Format::I, opcode::kOpImm, 0b101, 0x20},
    {Mnemonic::And, "and", Format::R, opcode::kOp, 0b111, 0x00},
    {Mnemonic::Andi, "andi", Format::I, opcode::kOpImm, 0b111, kAny},
    {Mnemonic::Or, "or", Format::R, opcode::kOp, 0b110, 0x00},
    {Mnemonic::Ori, "ori", Format::I, opcode::kOpImm, 0b110, kAny},
    {Mnemonic::Xor, "xor", Format::R, opcode::kOp, 0b100, 0x00},
    {Mnemonic::Xori, "xori", Format::I, opcode::kOpImm, 0b100, kAny},
    {Mnemonic::Slt, "slt", Format::R, opcode::kOp, 0b010, 0x00},
    {Mnemonic::Slti, "slti", Format::I, opcode::kOpImm, 0b010, kAny},
    {Mnemonic::Sltu, "sltu", Format::R, opcode::kOp, 0b011, 0x00},
    {Mnemonic::Sltiu, "sltiu", Format::I, opcode::kOpImm, 0b011, kAny},
    {Mnemonic::Lui, "lui", Format::U, opcode::kLui, kAny, kAny},
    {Mnemonic::Auipc, "auipc", Format::U, opcode::kAuipc, kAny, kAny},
    {Mnemonic::Beq, "beq", Format::B, opcode::kBranch, 0b000, kAny},
    {Mnemonic::Bne, "bne", Format::B, opcode::kBranch, 0b001, kAny},
    {Mnemonic::Blt, "blt", Format::B, opcode::kBranch, 0b100, kAny},
    {Mnemonic::Bltu, "bltu", Format::B, opcode::kBranch, 0b110, kAny},
    {Mnemonic::Bge, "bge", Format::B, opcode::kBranch, 0b101, kAny},
    {Mnemonic::Bgeu, "bgeu", Format::B, opcode::kBranch, 0b111, kAny},
    {Mnemonic::Jal, "jal", Format::J, opcode::kJal, kAny, kAny},
    {Mnemonic::Jalr, "jalr", Format::I, opcode::kJalr, 0b000, kAny},
    {Mnemonic::Lb, "lb", Format::I, opcode::kLoad, 0b000, kAny},
    {Mnemonic::Lbu, "lbu", Format::I, opcode::kLoad, 0b100, kAny},
    {Mnemonic::Lh, "lh", Format::I, opcode::kLoad, 0b001, kAny},
    {Mnemonic::Lhu, "lhu", Format::I, opcode::kLoad, 0b101, kAny},
    {Mnemonic::Lw, "lw", Format::I, opcode::kLoad, 0b010, kAny},
    {Mnemonic::Sb, "sb", Format::S, opcode::kStore, 0b000, kAny},
    {Mnemonic::Sh, "sh", Format::S, opcode::kStore, 0b001, kAny},
    {Mnemonic::Sw, "sw", Format::S, opcode::kStore, 0b010, kAny},
    {Mnemonic::Fence, "fence", Format::I, opcode::kMiscMem, 0b000, kAny},
    {Mnemonic::Ecall, "ecall", Format::I, opcode::kSystem, 0b000, kAny},
    {Mnemonic::Ebreak, "ebreak", Format::I, opcode::kSystem, 0b000, kAny},
}};

constexpr bool table_is_ordered() {
    for (std::size_t i = 0; i < kTable.size(); ++i) {
        if (static_cast<std::size_t>(kTable[i].mnemonic) != i) return false;
    }
    return true;
}
static_assert(table_is_ordered());

constexpr Word kEcallWord = 0x00000073;
constexpr Word kEbreakWord = 0x00100073;

const EncodingRow& row_of(Mnemonic m) { return kTable[static_cast<std::size_t>(m)]; }

Word field(Word w, unsigned hi, unsigned lo) { return bits::extract_field(w, hi, lo).value(); }

SWord sext(Word value, unsigned width) {
    return static_cast<SWord>(bits::sign_extend(bits::BitVec(value, width), 32).value());
}

SWord imm_i(Word w) { return sext(field(w, 31, 20), 12); }
SWord imm_s(Word w) { return sext((field(w, 31, 25) << 5) | field(w, 11, 7), 12); }
SWord imm_b(Word w) {
    const Word v = (field(w, 31, 31) << 12) | (field(w, 7, 7) << 11) | (field(w, 30, 25) << 5) |
                   (field(w, 11, 8) << 1);
    return sext(v, 13);
}
SWord imm_u(Word w) { return static_cast<SWord>(w & 0xFFFFF000u); }
SWord imm_j(Word w) {
    const Word v = (field(w, 31, 31) << 20) | (field(w, 19, 12) << 12) | (field(w, 20, 20) << 11) |
                   (field(w, 30, 21) << 1);
    return sext(v, 21);
}

std::optional<Mnemonic> match(Word opc, Word funct3, Word funct7) {
    for (const auto& row : kTable) {
        if (row.opcode != opc) continue;
        if (row.funct3 != kAny && static_cast<Word>(row.funct3) != funct3) continue;
        if (row.funct7 != kAny && static_cast<Word>(row.funct7) != funct7) continue;
        if (is_system(row.mnemonic) || row.mnemonic == Mnemonic::Fence) continue;  // exact-match forms
        return row.mnemonic;
    }
    return std::nullopt;
}

}  // namespace

const std::array<Mnemonic, kNumMnemonics>& all_mnemonics() {
    static const auto list = [] {
        std::array<Mnemonic, kNumMnemonics> out{};
        std::transform(kTable.begin(), kTable.end(), out.begin(),
                       [](const EncodingRow& r) { return r.mnemonic; });
        return out;
    }();
    return list;
}

std::string_view name_of(Mnemonic m) { return row_of(m).name; }

std::optional<Mnemonic> mnemonic_from_name(std::string_view name) {
    for (const auto& row : kTable) {
        if (row.name == name) return row.mnemonic;
    }
    return std::nullopt;
}

Format format_of(Mnemonic m) { return row_of(m).format; }

char format_letter(Format f) {
    switch (f) {
        case Format::R: return 'R';
        case Format::I: return 'I';
        case Format::S: return 'S';
        case Format::B: return 'B';
        case Format::U: return 'U';
        case Format::J: return 'J';
    }
    return '?';
}

ImmRange imm_range(Mnemonic m) {
    if (is_shift_imm(m)) return {0, 31};
    if (m == Mnemonic::Fence) return {0, 0xFF};
    if (is_system(m)) return {0, 0};
    switch (format_of(m)) {
        case Format::R: return {0, 0};
        case Format::I:
        case Format::S: return {-2048, 2047};
        case Format::B: return {-4096, 4094};
        case Format::U: return {std::numeric_limits<SWord>::min(), static_cast<SWord>(0x7FFFF000)};
        case Format::J: return {-(1 << 20), (1 << 20) - 2};
    }
    return {0, 0};
}

std::optional<Instruction> try_decode(Word w) {
    if (w == kEcallWord) return Instruction{Mnemonic::Ecall, 0, 0, 0, 0};
    if (w == kEbreakWord) return Instruction{Mnemonic::Ebreak, 0, 0, 0, 0};

    const Word opc = field(w, 6, 0);
    const auto rd = static_cast<std::uint8_t>(field(w, 11, 7));
    const Word funct3 = field(w, 14, 12);
    const auto rs1 = static_cast<std::uint8_t>(field(w, 19, 15));
    const auto rs2 = static_cast<std::uint8_t>(field(w, 24, 20));
    const Word funct7 = field(w, 31, 25);

    if (opc == opcode::kMiscMem) {
        // Only the plain fence: fm, rs1 and rd must be zero.
        if (funct3 != 0 || rd != 0 || rs1 != 0 || field(w, 31, 28) != 0) return std::nullopt;
        return Instruction{Mnemonic::Fence, 0, 0, 0, static_cast<SWord>(field(w, 27, 20))};
    }

    const auto m = match(opc, funct3, funct7);
    if (!m) return std::nullopt;

    Instruction out{*m, 0, 0, 0, 0};
    switch (format_of(*m)) {
        case Format::R:
            out.rd = rd;
            out.rs1 = rs1;
            out.rs2 = rs2;
            break;
        case Format::I:
            out.rd = rd;
            out.rs1 = rs1;
            out.imm = is_shift_imm(*m) ? static_cast<SWord>(rs2) : imm_i(w);
            break;
        case Format::S:
            out.rs1 = rs1;
            out.rs2 = rs2;
            out.imm = imm_s(w);
            break;
        case Format::B:
            out.rs1 = rs1;
            out.rs2 = rs2;
            out.imm = imm_b(w);
            break;
        case Format::U:
            out.rd = rd;
            out.imm = imm_u(w);
            break;
        case Format::J:
            out.rd = rd;
            out.imm = imm_j(w);
            break;
    }
    return out;
}

Instruction decode(Word w) {
    if (auto i = try_decode(w)) return *i;
    throw IsaError(IsaError::Kind::IllegalInstruction, fmt::format("illegal instruction 0x{:08x}", w));
}

Word encode(const Instruction& i) {
    const auto& row = row_of(i.mnemonic);
    const Format f = row.format;

    const bool uses_rd = f == Format::R || f == Format::I || f == Format::U || f == Format::J;
    const bool uses_rs1 = f == Format::R || f == Format::I || f == Format::S || f == Format::B;
    const bool uses_rs2 = f == Format::R || f == Format::S || f == Format::B;
    const bool fixed_regs = is_system(i.mnemonic) || i.mnemonic == Mnemonic::Fence;

    auto check_reg = [&](std::uint8_t r, bool used, std::string_view what) {
        if (r >= kNumRegisters || (!used && r != 0) || (fixed_regs && r != 0)) {
            throw IsaError(IsaError::Kind::FieldRange,
                           fmt::format("{}: {} field {} not encodable", row.name, what, r));
        }
    };
    check_reg(i.rd, uses_rd, "rd");
    check_reg(i.rs1, uses_rs1, "rs1");
    check_reg(i.rs2, uses_rs2, "rs2");

    const ImmRange range = imm_range(i.mnemonic);
    const bool needs_even = f == Format::B || f == Format::J;
    const bool low12_zero = f != Format::U || (i.imm & 0xFFF) == 0;
    if (i.imm < range.min || i.imm > range.max || (needs_even && (i.imm & 1) != 0) || !low12_zero) {
        throw IsaError(IsaError::Kind::ImmediateRange,
                       fmt::format("{}: immediate {} out of range", row.name, i.imm));
    }

    if (i.mnemonic == Mnemonic::Ecall) return kEcallWord;
    if (i.mnemonic == Mnemonic::Ebreak) return kEbreakWord;

    const auto imm = static_cast<Word>(i.imm);
    Word w = row.opcode | (Word{i.rd} << 7) | (Word{i.rs1} << 15) | (Word{i.rs2} << 20);
    if (row.funct3 != kAny) w |= static_cast<Word>(row.funct3) << 12;

    switch (f) {
        case Format::R:
            w |= static_cast<Word>(row.funct7) << 25;
            break;
        case Format::I:
            if (is_shift_imm(i.mnemonic)) {
                w |= (imm & 0x1F) << 20;
                w |= static_cast<Word>(row.funct7) << 25;
            } else {
                w |= (imm & 0xFFF) << 20;
            }
            break;
        case Format::S:
            w |= ((imm >> 5) & 0x7F) << 25;
            w |= (imm & 0x1F) << 7;
            break;
        case Format::B:
            w |= ((imm >> 12) & 0x1) << 31;
            w |= ((imm >> 5) & 0x3F) << 25;
            w |= ((imm >> 1) & 0xF) << 8;
            w |= ((imm >> 11) & 0x1) << 7;
            break;
        case Format::U:
            w |= imm & 0xFFFFF000u;
            break;
        case Format::J:
            w |= ((imm >> 20) & 0x1) << 31;
            w |= ((imm >> 1) & 0x3FF) << 21;
            w |= ((imm >> 11) & 0x1) << 20;
            w |= ((imm >> 12) & 0xFF) << 12;
            break;
    }
    return w;
}

}  // namespace rv32sc::isa
