#include "rv32sc/control.hpp"

#include <fmt/format.h>

namespace rv32sc::control {

using alu::AluOp;
using isa::Mnemonic;

namespace {

ControlSignals alu_reg(AluOp op) {
    ControlSignals s;
    s.reg_write = true;
    s.alu_src_b = AluSrcB::Reg;
    s.alu_op = op;
    return s;
}

ControlSignals alu_imm(AluOp op) {
    ControlSignals s = alu_reg(op);
    s.alu_src_b = AluSrcB::Imm;
    return s;
}

ControlSignals load(MemWidth width, bool is_unsigned) {
    ControlSignals s = alu_imm(AluOp::Add);
    s.mem_read = true;
    s.mem_to_reg = true;
    s.wb_src = WbSrc::Mem;
    s.mem_width = width;
    s.mem_unsigned = is_unsigned;
    return s;
}

ControlSignals store(MemWidth width) {
    ControlSignals s;
    s.mem_write = true;
    s.alu_src_b = AluSrcB::Imm;
    s.alu_op = AluOp::Add;
    s.mem_width = width;
    return s;
}

ControlSignals branch(BranchKind kind) {
    ControlSignals s;
    s.alu_src_b = AluSrcB::Reg;
    s.alu_op = AluOp::Sub;
    s.branch_kind = kind;
    s.pc_src = PcSrc::BranchTarget;
    return s;
}

}  // namespace

ControlSignals signals_for(Mnemonic m) {
    switch (m) {
        case Mnemonic::Add: return alu_reg(AluOp::Add);
        case Mnemonic::Sub: return alu_reg(AluOp::Sub);
        case Mnemonic::Sll: return alu_reg(AluOp::Sll);
        case Mnemonic::Srl: return alu_reg(AluOp::Srl);
        case Mnemonic::Sra: return alu_reg(AluOp::Sra);
        case Mnemonic::And: return alu_reg(AluOp::And);
        case Mnemonic::Or: return alu_reg(AluOp::Or);
        case Mnemonic::Xor: return alu_reg(AluOp::Xor);
        case Mnemonic::Slt: return alu_reg(AluOp::Slt);
        case Mnemonic::Sltu: return alu_reg(AluOp::Sltu);

        case Mnemonic::Addi: return alu_imm(AluOp::Add);
        case Mnemonic::Slli: return alu_imm(AluOp::Sll);
        case Mnemonic::Srli: return alu_imm(AluOp::Srl);
        case Mnemonic::Srai: return alu_imm(AluOp::Sra);
        case Mnemonic::Andi: return alu_imm(AluOp::And);
        case Mnemonic::Ori: return alu_imm(AluOp::Or);
        case Mnemonic::Xori: return alu_imm(AluOp::Xor);
        case Mnemonic::Slti: return alu_imm(AluOp::Slt);
        case Mnemonic::Sltiu: return alu_imm(AluOp::Sltu);

        case Mnemonic::Lui: {
            ControlSignals s = alu_imm(AluOp::Add);
            s.alu_src_a = AluSrcA::Zero;
            s.wb_src = WbSrc::ImmU;
            return s;
        }
        case Mnemonic::Auipc: {
            ControlSignals s = alu_imm(AluOp::Add);
            s.alu_src_a = AluSrcA::Pc;
            return s;
        }

        case Mnemonic::Beq: return branch(BranchKind::Beq);
        case Mnemonic::Bne: return branch(BranchKind::Bne);
        case Mnemonic::Blt: return branch(BranchKind::Blt);
        case Mnemonic::Bltu: return branch(BranchKind::Bltu);
        case Mnemonic::Bge: return branch(BranchKind::Bge);
        case Mnemonic::Bgeu: return branch(BranchKind::Bgeu);

        case Mnemonic::Jal: {
            ControlSignals s;
            s.reg_write = true;
            s.alu_src_a = AluSrcA::Pc;
            s.alu_src_b = AluSrcB::Imm;
            s.branch_kind = BranchKind::Jal;
            s.pc_src = PcSrc::JumpTarget;
            s.wb_src = WbSrc::PcPlus4;
            return s;
        }
        case Mnemonic::Jalr: {
            ControlSignals s;
            s.reg_write = true;
            s.alu_src_b = AluSrcB::Imm;
            s.branch_kind = BranchKind::Jalr;
            s.pc_src = PcSrc::JalrTarget;
            s.wb_src = WbSrc::PcPlus4;
            return s;
        }

        case Mnemonic::Lb: return load(MemWidth::Byte, false);
        case Mnemonic::Lbu: return load(MemWidth::Byte, true);
        case Mnemonic::Lh: return load(MemWidth::Half, false);
        case Mnemonic::Lhu: return load(MemWidth::Half, true);
        case Mnemonic::Lw: return load(MemWidth::Word, false);

        case Mnemonic::Sb: return store(MemWidth::Byte);
        case Mnemonic::Sh: return store(MemWidth::Half);
        case Mnemonic::Sw: return store(MemWidth::Word);

        case Mnemonic::Fence: return ControlSignals{};
        case Mnemonic::Ecall:
        case Mnemonic::Ebreak: {
            ControlSignals s;
            s.halt = true;
            return s;
        }
    }
    return ControlSignals{};
}

ControlSignals generate_signals(const isa::Instruction& i) { return signals_for(i.mnemonic); }

bool signals_consistent(const ControlSignals& s) {
    if (s.mem_read && s.mem_write) return false;
    if (s.mem_to_reg && !s.mem_read) return false;
    if ((s.wb_src == WbSrc::Mem) != s.mem_to_reg) return false;
    if (s.halt && (s.reg_write || s.mem_read || s.mem_write || s.pc_src != PcSrc::Plus4)) return false;
    if (s.mem_write && s.reg_write) return false;
    switch (s.branch_kind) {
        case BranchKind::None: return s.pc_src == PcSrc::Plus4;
        case BranchKind::Jal: return s.pc_src == PcSrc::JumpTarget && s.wb_src == WbSrc::PcPlus4;
        case BranchKind::Jalr: return s.pc_src == PcSrc::JalrTarget && s.wb_src == WbSrc::PcPlus4;
        default: return s.pc_src == PcSrc::BranchTarget && !s.reg_write && s.alu_op == alu::AluOp::Sub;
    }
}

std::string_view to_string(AluSrcA v) {
    switch (v) {
        case AluSrcA::Rs1: return "RS1";
        case AluSrcA::Pc: return "PC";
        case AluSrcA::Zero: return "ZERO";
    }
    return "?";
}

std::string_view to_string(AluSrcB v) { return v == AluSrcB::Reg ? "REG" : "IMM"; }

std::string_view to_string(BranchKind v) {
    switch (v) {
        case BranchKind::None: return "NONE";
        case BranchKind::Beq: return "BEQ";
        case BranchKind::Bne: return "BNE";
        case BranchKind::Blt: return "BLT";
        case BranchKind::Bltu: return "BLTU";
        case BranchKind::Bge: return "BGE";
        case BranchKind::Bgeu: return "BGEU";
        case BranchKind::Jal: return "JAL";
        case BranchKind::Jalr: return "JALR";
    }
    return "?";
}

std::string_view to_string(PcSrc v) {
    switch (v) {
        case PcSrc::Plus4: return "PLUS4";
        case PcSrc::BranchTarget: return "BRANCH_TARGET";
        case PcSrc::JumpTarget: return "JUMP_TARGET";
        case PcSrc::JalrTarget: return "JALR_TARGET";
    }
    return "?";
}

std::string_view to_string(WbSrc v) {
    switch (v) {
        case WbSrc::Alu: return "ALU";
        case WbSrc::Mem: return "MEM";
        case WbSrc::PcPlus4: return "PC_PLUS_4";
        case WbSrc::ImmU: return "IMM_U";
    }
    return "?";
}

std::string_view to_string(MemWidth v) {
    switch (v) {
        case MemWidth::Byte: return "BYTE";
        case MemWidth::Half: return "HALF";
        case MemWidth::Word: return "WORD";
    }
    return "?";
}

unsigned width_bytes(MemWidth w) {
    switch (w) {
        case MemWidth::Byte: return 1;
        case MemWidth::Half: return 2;
        case MemWidth::Word: return 4;
    }
    return 4;
}

std::string control_table_csv() {
    std::string out =
        "mnemonic,format,reg_write,mem_read,mem_write,mem_to_reg,alu_src_a,alu_src_b,alu_op,"
        "branch_kind,pc_src,wb_src,mem_width,mem_unsigned,output_enable,halt\n";
    for (const auto m : isa::all_mnemonics()) {
        const auto s = signals_for(m);
        out += fmt::format("{},{},{:d},{:d},{:d},{:d},{},{},{},{},{},{},{},{:d},{:d},{:d}\n",
                           isa::name_of(m), isa::format_letter(isa::format_of(m)), s.reg_write,
                           s.mem_read, s.mem_write, s.mem_to_reg, to_string(s.alu_src_a),
                           to_string(s.alu_src_b), alu::to_string(s.alu_op), to_string(s.branch_kind),
                           to_string(s.pc_src), to_string(s.wb_src), to_string(s.mem_width),
                           s.mem_unsigned, s.output_enable, s.halt);
    }
    return out;
}

}  // namespace rv32sc::control
