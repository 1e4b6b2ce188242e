#pragma once

// Control unit: maps a decoded instruction to the signal bundle that steers
// the single-cycle datapath.

#include <cstdint>
#include <string>
#include <string_view>

#include "rv32sc/alu.hpp"
#include "rv32sc/isa.hpp"

namespace rv32sc::control {

enum class AluSrcA : std::uint8_t { Rs1, Pc, Zero };
enum class AluSrcB : std::uint8_t { Reg, Imm };
enum class BranchKind : std::uint8_t { None, Beq, Bne, Blt, Bltu, Bge, Bgeu, Jal, Jalr };
enum class PcSrc : std::uint8_t { Plus4, BranchTarget, JumpTarget, JalrTarget };
enum class WbSrc : std::uint8_t { Alu, Mem, PcPlus4, ImmU };
enum class MemWidth : std::uint8_t { Byte, Half, Word };

struct ControlSignals {
    bool reg_write = false;
    bool mem_read = false;
    bool mem_write = false;
    bool mem_to_reg = false;
    AluSrcA alu_src_a = AluSrcA::Rs1;
    AluSrcB alu_src_b = AluSrcB::Reg;
    alu::AluOp alu_op = alu::AluOp::Add;
    BranchKind branch_kind = BranchKind::None;
    PcSrc pc_src = PcSrc::Plus4;
    WbSrc wb_src = WbSrc::Alu;
    MemWidth mem_width = MemWidth::Word;
    bool mem_unsigned = false;
    // Never set by the decoder: raised by the data memory when a store hits the display latch.
    bool output_enable = false;
    bool halt = false;

    friend bool operator==(const ControlSignals&, const ControlSignals&) = default;
};

ControlSignals signals_for(isa::Mnemonic m);
ControlSignals generate_signals(const isa::Instruction& i);

// True when the bundle satisfies the structural constraints of the control unit.
bool signals_consistent(const ControlSignals& s);

std::string_view to_string(AluSrcA v);
std::string_view to_string(AluSrcB v);
std::string_view to_string(BranchKind v);
std::string_view to_string(PcSrc v);
std::string_view to_string(WbSrc v);
std::string_view to_string(MemWidth v);

unsigned width_bytes(MemWidth w);

// The whole control table as CSV, header plus one row per mnemonic.
std::string control_table_csv();

}  // namespace rv32sc::control
