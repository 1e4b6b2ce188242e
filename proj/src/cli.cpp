#include "rv32sc/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rv32sc/assembler.hpp"
#include "rv32sc/control.hpp"
#include "rv32sc/image.hpp"

namespace rv32sc::cli {

namespace {

struct Failure {
    int code;
    std::string message;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kIoError, fmt::format("cannot open '{}'", path)};
    std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Failure{kIoError, fmt::format("error reading '{}'", path)};
    return data;
}

void write_file(const std::string& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kIoError, fmt::format("cannot write '{}'", path)};
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw Failure{kIoError, fmt::format("error writing '{}'", path)};
}

std::string extension(const std::string& path) {
    std::string ext = std::filesystem::path(path).extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

bool is_source(const std::string& path) {
    const auto ext = extension(path);
    return ext == ".s" || ext == ".asm";
}

image::MemImage assemble_file(const std::string& path, Word origin) {
    const auto bytes = read_file(path);
    const std::string text(bytes.begin(), bytes.end());
    try {
        return assembler::assemble(text, origin).image;
    } catch (const assembler::AsmError& e) {
        std::string msg;
        for (const auto& d : e.diagnostics()) {
            if (!msg.empty()) msg += '\n';
            msg += path + ":" + d.to_string();
        }
        throw Failure{kUserError, msg};
    }
}

// Assembly source, v2.0 raw text, or little-endian binary.
image::MemImage load_image(const std::string& path) {
    if (is_source(path)) return assemble_file(path, 0);
    const auto bytes = read_file(path);
    try {
        const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        if (extension(path) == ".bin" && !image::looks_like_v2raw(text)) return image::read_bin(bytes);
        return image::read_v2raw(text);
    } catch (const image::ImageError& e) {
        throw Failure{kUserError, fmt::format("{}: {}", path, e.what())};
    }
}

// Logisim images always start at address 0.
image::MemImage rebased(const image::MemImage& img) {
    image::MemImage out;
    out.words.assign(img.origin / 4, 0);
    out.words.insert(out.words.end(), img.words.begin(), img.words.end());
    return out;
}

core::MachineState build_machine(const RunConfig& cfg) {
    const auto program = load_image(cfg.imem_image);
    try {
        auto s = core::make_machine(cfg.machine, program.words, program.origin);
        if (cfg.dmem_image) {
            const auto data = load_image(*cfg.dmem_image);
            s.dmem.load_words(data.origin, data.words);
        }
        return s;
    } catch (const std::invalid_argument& e) {
        throw Failure{kUserError, e.what()};
    }
}

void print_summary(const core::MachineState& s, const RunConfig& cfg, std::ostream& out) {
    out << "status: " << s.status.to_string() << '\n';
    out << "cycles: " << s.cycle_count << '\n';
    out << fmt::format("pc: 0x{:08x}\n", s.pc);
    for (unsigned r = 0; r < kNumRegisters; ++r) {
        out << fmt::format("x{}=0x{:x}", r, s.rf.at(r)) << ((r % 8 == 7) ? '\n' : ' ');
    }
    out << fmt::format("output: 0x{:08x}\n", s.dmem.output_latch());
    out << display::render_output(s.dmem.output_latch(), cfg.digit_count);
    if (cfg.dump_dmem) out << dump_memory(s.dmem);
}

int exit_for(const core::MachineState& s) {
    switch (s.status.state) {
        case core::RunState::Halted: return kOk;
        case core::RunState::Fault: return kUserError;
        case core::RunState::Running: return kBudgetExhausted;
    }
    return kUserError;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    }
}

}  // namespace

std::string dump_memory(const datapath::DataMemory& dm) {
    std::string out;
    const auto bytes = dm.bytes();
    for (std::size_t addr = 0; addr + 4 <= bytes.size(); addr += 4) {
        if (addr % 32 == 0) out += fmt::format("{:08x}:", addr);
        const Word w = Word{bytes[addr]} | (Word{bytes[addr + 1]} << 8) | (Word{bytes[addr + 2]} << 16) |
                       (Word{bytes[addr + 3]} << 24);
        out += fmt::format(" {:08x}", w);
        if (addr % 32 == 28 || addr + 8 > bytes.size()) out += '\n';
    }
    return out;
}

int cmd_asm(const std::string& input, const std::string& output, const std::string& format, Word origin,
            std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (origin % 4 != 0) throw Failure{kUserError, "origin must be word-aligned"};
        const auto img = rebased(assemble_file(input, origin));
        const bool bin = format == "bin" || (format.empty() && extension(output) == ".bin");
        if (bin) {
            const auto bytes = image::write_bin(img);
            write_file(output, std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
        } else {
            write_file(output, image::write_v2raw(img));
        }
        out << fmt::format("{}: {} words\n", output, img.words.size());
        return static_cast<int>(kOk);
    });
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto s = build_machine(cfg);
        if (cfg.trace && cfg.engine == EngineChoice::Functional) {
            throw Failure{kUserError, "--trace needs the structural or differential engine"};
        }

        if (cfg.engine == EngineChoice::Differential) {
            auto ref = s;
            for (std::uint64_t n = 0; n < cfg.max_cycles && s.status.is_running(); ++n) {
                if (cfg.trace) {
                    out << core::format_trace_line(core::trace_step(s)) << '\n';
                } else {
                    core::step_structural(s);
                }
                core::step_functional(ref);
                if (const auto diff = core::first_difference(s, ref); !diff.empty()) {
                    print_summary(s, cfg, out);
                    err << fmt::format("divergence at cycle {}: {}\n", s.cycle_count, diff);
                    return static_cast<int>(kDivergence);
                }
            }
        } else if (cfg.trace) {
            for (std::uint64_t n = 0; n < cfg.max_cycles && s.status.is_running(); ++n) {
                out << core::format_trace_line(core::trace_step(s)) << '\n';
            }
        } else {
            core::run(s, cfg.max_cycles,
                      cfg.engine == EngineChoice::Functional ? core::Engine::Functional : core::Engine::Structural);
        }

        print_summary(s, cfg, out);
        if (s.status.is_running()) err << fmt::format("cycle budget of {} exhausted\n", cfg.max_cycles);
        return exit_for(s);
    });
}

int cmd_step(const RunConfig& cfg, std::uint64_t count, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto s = build_machine(cfg);
        for (std::uint64_t n = 0; n < count && s.status.is_running(); ++n) {
            out << core::format_trace_line(core::trace_step(s)) << '\n';
        }
        out << "status: " << s.status.to_string() << '\n';
        return s.status.state == core::RunState::Fault ? static_cast<int>(kUserError) : static_cast<int>(kOk);
    });
}

int cmd_disasm(const std::string& input, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto img = load_image(input);
        Word pc = img.origin;
        for (const Word w : img.words) {
            out << fmt::format("{:08x}:\t{:08x}\t{}\n", pc, w, assembler::disassemble(w, pc));
            pc += 4;
        }
        return static_cast<int>(kOk);
    });
}

int cmd_controls(std::ostream& out) {
    out << control::control_table_csv();
    return kOk;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Single-cycle RV32I simulator, assembler and display tools", "rv32sc"};
    app.require_subcommand(1);

    std::string asm_in;
    std::string asm_out;
    std::string asm_format;
    Word asm_origin = 0;
    auto* asm_cmd = app.add_subcommand("asm", "Assemble a source file into a memory image");
    asm_cmd->add_option("input", asm_in, "Assembly source")->required();
    asm_cmd->add_option("-o,--output", asm_out, "Output image path")->required();
    asm_cmd->add_option("-f,--format", asm_format, "raw (Logisim v2.0 raw) or bin")
        ->check(CLI::IsMember({"raw", "bin"}));
    asm_cmd->add_option("--origin", asm_origin, "Load address of the first statement");

    RunConfig cfg;
    std::uint64_t step_count = 1;
    auto add_machine_options = [&](CLI::App* cmd) {
        cmd->add_option("image", cfg.imem_image, "Program: .s source, v2.0 raw image, or .bin")->required();
        cmd->add_option("--dmem", cfg.dmem_image, "Initial data memory image");
        cmd->add_option("--imem-size", cfg.machine.imem_bytes, "Instruction memory bytes");
        cmd->add_option("--dmem-size", cfg.machine.dmem_bytes, "Data memory bytes (power of two)");
        cmd->add_option("--display-addr", cfg.machine.display_addr, "Output latch address");
        cmd->add_option("--digits", cfg.digit_count, "Seven-segment digits shown")->check(CLI::Range(1u, 10u));
    };

    auto* run_cmd = app.add_subcommand("run", "Run a program until it halts, faults or exhausts its budget");
    add_machine_options(run_cmd);
    run_cmd->add_option("--max-cycles", cfg.max_cycles, "Cycle budget");
    run_cmd->add_option("--engine", cfg.engine, "structural, functional or differential")
        ->transform(CLI::CheckedTransformer(std::map<std::string, EngineChoice>{
            {"structural", EngineChoice::Structural},
            {"functional", EngineChoice::Functional},
            {"differential", EngineChoice::Differential},
        }));
    run_cmd->add_flag("--trace", cfg.trace, "Print one trace line per cycle");
    run_cmd->add_flag("--dump-dmem", cfg.dump_dmem, "Print data memory after the run");

    auto* step_cmd = app.add_subcommand("step", "Execute a fixed number of traced steps");
    add_machine_options(step_cmd);
    step_cmd->add_option("-n,--count", step_count, "Number of steps");

    std::string disasm_in;
    auto* disasm_cmd = app.add_subcommand("disasm", "Disassemble a memory image");
    disasm_cmd->add_option("image", disasm_in, "v2.0 raw image, .bin, or .s source")->required();

    bool table = false;
    auto* controls_cmd = app.add_subcommand("controls", "Print the control-signal table");
    controls_cmd->add_flag("--table", table, "CSV, one row per mnemonic");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUserError;
    }

    if (asm_cmd->parsed()) return cmd_asm(asm_in, asm_out, asm_format, asm_origin, out, err);
    if (run_cmd->parsed()) return cmd_run(cfg, out, err);
    if (step_cmd->parsed()) return cmd_step(cfg, step_count, out, err);
    if (disasm_cmd->parsed()) return cmd_disasm(disasm_in, out, err);
    if (controls_cmd->parsed()) return cmd_controls(out);
    return kUserError;
}

}  // namespace rv32sc::cli
