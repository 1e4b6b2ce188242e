#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rv32sc/core.hpp"
#include "rv32sc/display.hpp"

namespace rv32sc::cli {

// Process exit codes.
enum ExitCode : int {
    kOk = 0,
    kUserError = 1,  // bad arguments, assembly errors, malformed images, program faults
    kIoError = 2,
    kDivergence = 3,
    kBudgetExhausted = 4,
};

enum class EngineChoice { Structural, Functional, Differential };

struct RunConfig {
    std::string imem_image;
    std::optional<std::string> dmem_image;
    std::uint64_t max_cycles = 1'000'000;
    EngineChoice engine = EngineChoice::Structural;
    bool trace = false;
    bool dump_dmem = false;
    core::MachineConfig machine;
    unsigned digit_count = display::kDefaultDigitCount;
};

int cmd_asm(const std::string& input, const std::string& output, const std::string& format, Word origin,
            std::ostream& out, std::ostream& err);
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_step(const RunConfig& config, std::uint64_t count, std::ostream& out, std::ostream& err);
int cmd_disasm(const std::string& input, std::ostream& out, std::ostream& err);
int cmd_controls(std::ostream& out);

// `addr: word ...` lines, eight words per line, lowercase hex.
std::string dump_memory(const datapath::DataMemory& dm);

// Parses argv-style arguments (without the program name) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rv32sc::cli
