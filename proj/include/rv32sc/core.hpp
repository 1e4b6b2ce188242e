#pragma once

// The CPU step engines. The structural engine wires the datapath components
// together under the control unit's signals; the functional engine interprets
// the ISA directly and serves as its differential oracle.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "rv32sc/control.hpp"
#include "rv32sc/datapath.hpp"
#include "rv32sc/isa.hpp"
#include "rv32sc/types.hpp"

namespace rv32sc::core {

enum class RunState : std::uint8_t { Running, Halted, Fault };

struct Status {
    RunState state = RunState::Running;
    TrapKind trap = TrapKind::Ecall;  // meaningful only when not running

    static Status running() { return {}; }
    static Status stopped(TrapKind k) {
        return {is_clean_halt(k) ? RunState::Halted : RunState::Fault, k};
    }

    bool is_running() const { return state == RunState::Running; }
    std::string to_string() const;

    friend bool operator==(const Status& a, const Status& b) {
        return a.state == b.state && (a.state == RunState::Running || a.trap == b.trap);
    }
};

struct MachineConfig {
    Word imem_bytes = datapath::kDefaultImemBytes;
    Word dmem_bytes = datapath::kDefaultDmemBytes;
    Word display_addr = datapath::kDefaultDisplayAddr;
    Word reset_pc = 0;
};

struct MachineState {
    Word pc = 0;
    datapath::RegisterFile rf;
    std::shared_ptr<const datapath::InstructionMemory> imem;
    datapath::DataMemory dmem;
    Status status;
    std::uint64_t cycle_count = 0;
};

// Builds a reset machine: IMem of config.imem_bytes zero-filled words at
// base 0 with the program placed at program_origin, zeroed DMem, pc at
// config.reset_pc. Throws std::invalid_argument if the program does not fit.
MachineState make_machine(const MachineConfig& config, std::span<const Word> program,
                          Word program_origin = 0);

// Field-for-field comparison of architectural state.
bool same_state(const MachineState& a, const MachineState& b);
// Empty when the states match, otherwise names the first differing field.
std::string first_difference(const MachineState& a, const MachineState& b);

enum class Engine : std::uint8_t { Structural, Functional };

// One instruction per call. No-op unless the machine is running. Traps are
// captured in status; a faulting instruction leaves pc on itself and has no
// architectural side effects. Every executed step counts one cycle,
// including the one that halts or faults.
void step_structural(MachineState& s);
void step_functional(MachineState& s);
void step(MachineState& s, Engine engine);

enum class StopReason : std::uint8_t { Halted, Fault, CycleBudgetExhausted };
std::string_view to_string(StopReason r);

// Steps until the machine stops or max_cycles steps have been taken.
StopReason run(MachineState& s, std::uint64_t max_cycles, Engine engine = Engine::Structural);

struct RegWrite {
    unsigned rd;
    Word value;
};

struct MemAccess {
    Word addr;
    Word value;
    control::MemWidth width;
    bool write;
    bool output_enable;
};

struct TraceRecord {
    std::uint64_t cycle = 0;
    Word pc = 0;
    std::optional<Word> raw;
    std::string disasm;
    std::optional<control::ControlSignals> signals;
    std::optional<RegWrite> reg_write;
    std::optional<MemAccess> mem;
    Status status_after;
};

// Records and performs one structural step. Throws std::logic_error when the
// machine is not running.
TraceRecord trace_step(MachineState& s);

// `cycle<TAB>pc<TAB>raw<TAB>disasm<TAB>writes`
std::string format_trace_line(const TraceRecord& r);

}  // namespace rv32sc::core
