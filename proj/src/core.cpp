#include "rv32sc/core.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "rv32sc/alu.hpp"
#include "rv32sc/assembler.hpp"

namespace rv32sc::core {

using control::AluSrcA;
using control::AluSrcB;
using control::WbSrc;
using isa::Mnemonic;

std::string Status::to_string() const {
    switch (state) {
        case RunState::Running: return "RUNNING";
        case RunState::Halted: return fmt::format("HALTED({})", rv32sc::to_string(trap));
        case RunState::Fault: return fmt::format("FAULT({})", rv32sc::to_string(trap));
    }
    return "?";
}

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::Halted: return "HALTED";
        case StopReason::Fault: return "FAULT";
        case StopReason::CycleBudgetExhausted: return "CYCLE_BUDGET_EXHAUSTED";
    }
    return "?";
}

MachineState make_machine(const MachineConfig& config, std::span<const Word> program, Word program_origin) {
    if (config.imem_bytes == 0 || config.imem_bytes % 4 != 0) {
        throw std::invalid_argument("instruction memory size must be a nonzero multiple of 4");
    }
    if (config.reset_pc % 4 != 0) throw std::invalid_argument("reset pc must be word-aligned");
    if (program_origin % 4 != 0) throw std::invalid_argument("program origin must be word-aligned");

    const Word capacity = config.imem_bytes / 4;
    const Word first = program_origin / 4;
    if (first > capacity || capacity - first < program.size()) {
        throw std::invalid_argument(fmt::format("program of {} words at 0x{:08x} exceeds {} bytes of instruction memory",
                                                program.size(), program_origin, config.imem_bytes));
    }
    std::vector<Word> words(capacity, 0);
    std::copy(program.begin(), program.end(), words.begin() + first);

    MachineState s{
        .pc = config.reset_pc,
        .rf = {},
        .imem = std::make_shared<const datapath::InstructionMemory>(0, std::move(words)),
        .dmem = datapath::DataMemory(config.dmem_bytes, config.display_addr),
        .status = Status::running(),
        .cycle_count = 0,
    };
    return s;
}

std::string first_difference(const MachineState& a, const MachineState& b) {
    if (a.status != b.status) return fmt::format("status {} vs {}", a.status.to_string(), b.status.to_string());
    if (a.pc != b.pc) return fmt::format("pc 0x{:08x} vs 0x{:08x}", a.pc, b.pc);
    for (unsigned r = 0; r < kNumRegisters; ++r) {
        if (a.rf.at(r) != b.rf.at(r)) return fmt::format("x{} 0x{:08x} vs 0x{:08x}", r, a.rf.at(r), b.rf.at(r));
    }
    if (a.cycle_count != b.cycle_count) return fmt::format("cycle {} vs {}", a.cycle_count, b.cycle_count);
    if (a.dmem.output_latch() != b.dmem.output_latch()) {
        return fmt::format("output latch 0x{:08x} vs 0x{:08x}", a.dmem.output_latch(), b.dmem.output_latch());
    }
    const auto ab = a.dmem.bytes();
    const auto bb = b.dmem.bytes();
    if (ab.size() != bb.size()) return fmt::format("dmem size {} vs {}", ab.size(), bb.size());
    for (std::size_t i = 0; i < ab.size(); ++i) {
        if (ab[i] != bb[i]) return fmt::format("dmem[0x{:08x}] 0x{:02x} vs 0x{:02x}", i, ab[i], bb[i]);
    }
    if (a.imem != b.imem && !(a.imem && b.imem && *a.imem == *b.imem)) return "instruction memory";
    return {};
}

bool same_state(const MachineState& a, const MachineState& b) { return first_difference(a, b).empty(); }

namespace {

// ---------------------------------------------------------------------------
// Structural engine

void execute_structural(MachineState& s, TraceRecord* rec) {
    if (!s.status.is_running()) return;
    ++s.cycle_count;
    if (rec) {
        rec->cycle = s.cycle_count;
        rec->pc = s.pc;
    }

    try {
        const Word raw = s.imem->fetch(s.pc);
        if (rec) {
            rec->raw = raw;
            rec->disasm = assembler::disassemble(raw, s.pc);
        }
        const auto inst = isa::try_decode(raw);
        if (!inst) throw TrapError(TrapKind::IllegalInstruction);

        auto sig = control::generate_signals(*inst);
        if (sig.halt) {
            if (rec) rec->signals = sig;
            throw TrapError(inst->mnemonic == Mnemonic::Ecall ? TrapKind::Ecall : TrapKind::Ebreak);
        }

        const auto ports = s.rf.read(inst->rs1, inst->rs2);
        const Word imm = static_cast<Word>(inst->imm);

        Word alu_a = ports.rd1;
        if (sig.alu_src_a == AluSrcA::Pc) alu_a = s.pc;
        if (sig.alu_src_a == AluSrcA::Zero) alu_a = 0;
        const Word alu_b = sig.alu_src_b == AluSrcB::Imm ? imm : ports.rd2;
        const auto alu_out = alu::alu_exec(sig.alu_op, alu_a, alu_b);

        // Next pc depends only on combinational values, so it is settled
        // before any state element is clocked.
        const Word next_pc = datapath::pc_next(s.pc, sig, alu_out, imm, ports.rd1);

        const auto mem = s.dmem.access(alu_out.value, ports.rd2, sig.mem_width, sig.mem_unsigned,
                                       sig.mem_read, sig.mem_write);
        sig.output_enable = mem.output_enable;

        Word wb = 0;
        switch (sig.wb_src) {
            case WbSrc::Alu: wb = alu_out.value; break;
            case WbSrc::Mem: wb = mem.rd; break;
            case WbSrc::PcPlus4: wb = s.pc + 4; break;
            case WbSrc::ImmU: wb = imm; break;
        }
        s.rf.write(inst->rd, wb, sig.reg_write);
        s.pc = next_pc;

        if (rec) {
            rec->signals = sig;
            if (sig.reg_write && inst->rd != 0) rec->reg_write = RegWrite{inst->rd, wb};
            if (sig.mem_read || sig.mem_write) {
                rec->mem = MemAccess{alu_out.value, sig.mem_write ? ports.rd2 : mem.rd, sig.mem_width,
                                     sig.mem_write, mem.output_enable};
            }
        }
    } catch (const TrapError& trap) {
        s.status = Status::stopped(trap.kind());
    }
    if (rec) rec->status_after = s.status;
}

// ---------------------------------------------------------------------------
// Functional engine: direct ISA semantics on native integers.

struct Fault {
    TrapKind kind;
};

Word fn_load(const MachineState& s, Word addr, unsigned size, bool sign) {
    if (addr & (size - 1)) throw Fault{TrapKind::MisalignedAccess};
    Word raw = 0;
    if ((addr & ~3u) == s.dmem.display_addr()) {
        raw = s.dmem.output_latch() >> (8 * (addr & 3u));
    } else {
        const auto mem = s.dmem.bytes();
        if (std::uint64_t{addr} + size > mem.size()) throw Fault{TrapKind::AccessOutOfRange};
        for (unsigned i = 0; i < size; ++i) raw |= Word{mem[addr + i]} << (8 * i);
    }
    switch (size) {
        case 1: return sign ? static_cast<Word>(static_cast<std::int8_t>(raw)) : (raw & 0xFFu);
        case 2: return sign ? static_cast<Word>(static_cast<std::int16_t>(raw)) : (raw & 0xFFFFu);
        default: return raw;
    }
}

void fn_store(MachineState& s, Word addr, unsigned size, Word value) {
    if (addr & (size - 1)) throw Fault{TrapKind::MisalignedAccess};
    if ((addr & ~3u) == s.dmem.display_addr()) {
        const unsigned shift = 8 * (addr & 3u);
        const Word mask = (size == 4 ? 0xFFFFFFFFu : ((1u << (8 * size)) - 1u)) << shift;
        s.dmem.set_output_latch((s.dmem.output_latch() & ~mask) | ((value << shift) & mask));
        return;
    }
    auto mem = s.dmem.bytes();
    if (std::uint64_t{addr} + size > mem.size()) throw Fault{TrapKind::AccessOutOfRange};
    for (unsigned i = 0; i < size; ++i) mem[addr + i] = static_cast<std::uint8_t>(value >> (8 * i));
}

void execute_functional(MachineState& s) {
    if (!s.status.is_running()) return;
    ++s.cycle_count;

    const auto words = s.imem->words();
    const Word base = s.imem->base();
    if (s.pc < base || (s.pc - base) / 4 >= words.size()) {
        s.status = Status::stopped(TrapKind::FetchOutOfRange);
        return;
    }
    const auto decoded = isa::try_decode(words[(s.pc - base) / 4]);
    if (!decoded) {
        s.status = Status::stopped(TrapKind::IllegalInstruction);
        return;
    }
    const isa::Instruction& in = *decoded;

    const Word x1 = s.rf.at(in.rs1);
    const Word x2 = s.rf.at(in.rs2);
    const Word imm = static_cast<Word>(in.imm);
    const auto sx1 = static_cast<SWord>(x1);
    const auto sx2 = static_cast<SWord>(x2);
    const auto simm = in.imm;

    std::optional<Word> rd_value;
    Word next = s.pc + 4;

    auto jump = [&](Word target) {
        if (target & 3u) throw Fault{TrapKind::MisalignedTarget};
        next = target;
    };
    auto branch = [&](bool taken) {
        if (taken) jump(s.pc + imm);
    };

    try {
        switch (in.mnemonic) {
            case Mnemonic::Add: rd_value = x1 + x2; break;
            case Mnemonic::Sub: rd_value = x1 - x2; break;
            case Mnemonic::Sll: rd_value = x1 << (x2 & 31u); break;
            case Mnemonic::Srl: rd_value = x1 >> (x2 & 31u); break;
            case Mnemonic::Sra: rd_value = static_cast<Word>(sx1 >> (x2 & 31u)); break;
            case Mnemonic::And: rd_value = x1 & x2; break;
            case Mnemonic::Or: rd_value = x1 | x2; break;
            case Mnemonic::Xor: rd_value = x1 ^ x2; break;
            case Mnemonic::Slt: rd_value = sx1 < sx2 ? 1u : 0u; break;
            case Mnemonic::Sltu: rd_value = x1 < x2 ? 1u : 0u; break;

            case Mnemonic::Addi: rd_value = x1 + imm; break;
            case Mnemonic::Slli: rd_value = x1 << (imm & 31u); break;
            case Mnemonic::Srli: rd_value = x1 >> (imm & 31u); break;
            case Mnemonic::Srai: rd_value = static_cast<Word>(sx1 >> (imm & 31u)); break;
            case Mnemonic::Andi: rd_value = x1 & imm; break;
            case Mnemonic::Ori: rd_value = x1 | imm; break;
            case Mnemonic::Xori: rd_value = x1 ^ imm; break;
            case Mnemonic::Slti: rd_value = sx1 < simm ? 1u : 0u; break;
            case Mnemonic::Sltiu: rd_value = x1 < imm ? 1u : 0u; break;

            case Mnemonic::Lui: rd_value = imm; break;
            case Mnemonic::Auipc: rd_value = s.pc + imm; break;

            case Mnemonic::Beq: branch(x1 == x2); break;
            case Mnemonic::Bne: branch(x1 != x2); break;
            case Mnemonic::Blt: branch(sx1 < sx2); break;
            case Mnemonic::Bge: branch(sx1 >= sx2); break;
            case Mnemonic::Bltu: branch(x1 < x2); break;
            case Mnemonic::Bgeu: branch(x1 >= x2); break;

            case Mnemonic::Jal:
                jump(s.pc + imm);
                rd_value = s.pc + 4;
                break;
            case Mnemonic::Jalr:
                jump((x1 + imm) & ~1u);
                rd_value = s.pc + 4;
                break;

            case Mnemonic::Lb: rd_value = fn_load(s, x1 + imm, 1, true); break;
            case Mnemonic::Lbu: rd_value = fn_load(s, x1 + imm, 1, false); break;
            case Mnemonic::Lh: rd_value = fn_load(s, x1 + imm, 2, true); break;
            case Mnemonic::Lhu: rd_value = fn_load(s, x1 + imm, 2, false); break;
            case Mnemonic::Lw: rd_value = fn_load(s, x1 + imm, 4, false); break;

            case Mnemonic::Sb: fn_store(s, x1 + imm, 1, x2); break;
            case Mnemonic::Sh: fn_store(s, x1 + imm, 2, x2); break;
            case Mnemonic::Sw: fn_store(s, x1 + imm, 4, x2); break;

            case Mnemonic::Fence: break;
            case Mnemonic::Ecall: throw Fault{TrapKind::Ecall};
            case Mnemonic::Ebreak: throw Fault{TrapKind::Ebreak};
        }
    } catch (const Fault& f) {
        s.status = Status::stopped(f.kind);
        return;
    }

    if (rd_value && in.rd != 0) s.rf.write(in.rd, *rd_value, true);
    s.pc = next;
}

}  // namespace

void step_structural(MachineState& s) { execute_structural(s, nullptr); }

void step_functional(MachineState& s) { execute_functional(s); }

void step(MachineState& s, Engine engine) {
    if (engine == Engine::Structural) {
        step_structural(s);
    } else {
        step_functional(s);
    }
}

StopReason run(MachineState& s, std::uint64_t max_cycles, Engine engine) {
    for (std::uint64_t n = 0; n < max_cycles && s.status.is_running(); ++n) step(s, engine);
    switch (s.status.state) {
        case RunState::Running: return StopReason::CycleBudgetExhausted;
        case RunState::Halted: return StopReason::Halted;
        case RunState::Fault: return StopReason::Fault;
    }
    return StopReason::Fault;
}

TraceRecord trace_step(MachineState& s) {
    if (!s.status.is_running()) {
        throw std::logic_error("cannot trace a machine that is " + s.status.to_string());
    }
    TraceRecord rec;
    execute_structural(s, &rec);
    return rec;
}

std::string format_trace_line(const TraceRecord& r) {
    std::string writes;
    auto add = [&](const std::string& item) {
        if (!writes.empty()) writes += ' ';
        writes += item;
    };
    if (r.reg_write) add(fmt::format("x{}=0x{:08x}", r.reg_write->rd, r.reg_write->value));
    if (r.mem && r.mem->write) {
        const char suffix = r.mem->width == control::MemWidth::Byte   ? 'b'
                            : r.mem->width == control::MemWidth::Half ? 'h'
                                                                      : 'w';
        add(fmt::format("mem[0x{:08x}].{}=0x{:08x}", r.mem->addr, suffix, r.mem->value));
        if (r.mem->output_enable) add("out");
    }
    if (!r.status_after.is_running()) add(r.status_after.to_string());
    if (writes.empty()) writes = "-";

    return fmt::format("{}\t0x{:08x}\t{}\t{}\t{}", r.cycle, r.pc, r.raw ? fmt::format("0x{:08x}", *r.raw) : "-",
                       r.disasm.empty() ? "-" : r.disasm, writes);
}

}  // namespace rv32sc::core
