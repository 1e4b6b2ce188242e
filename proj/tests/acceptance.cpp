// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>

#include <fmt/format.h>

#include "rv32sc/assembler.hpp"
#include "rv32sc/bits.hpp"
#include "rv32sc/core.hpp"
#include "rv32sc/display.hpp"
#include "rv32sc/image.hpp"
#include "test_support.hpp"

using namespace rv32sc;
using isa::Instruction;
using isa::Mnemonic;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

int failures = 0;

void criterion(int n, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) o.fail(fmt::format("took {:.2f} s, limit {:.0f} s", secs, limit_s));
    if (!o.ok) ++failures;
    fmt::print("{} criterion {}: {} [{:.2f} s]{}{}\n", o.ok ? "PASS" : "FAIL", n, title, secs,
               o.detail.empty() ? "" : " - ", o.detail);
    std::fflush(stdout);
}

core::MachineState load_program(const std::filesystem::path& p) {
    const auto img = assembler::assemble(testkit::read_text(p)).image;
    return core::make_machine({}, img.words, img.origin);
}

// Single-instruction semantics written out by hand: registers x1 = 0xFFFFFFF0
// (-16), x2 = 3, x3 = 0x80000000, dmem word at 0x100 = 0x8081F2F3, pc = 0x40.
struct Vector {
    const char* source;
    unsigned reg;  // destination to check, 0 for none
    Word value;
    Word next_pc;
};

const Vector kVectors[] = {
    {"add x5, x1, x2", 5, 0xFFFFFFF3, 0x44},
    {"addi x5, x1, -1", 5, 0xFFFFFFEF, 0x44},
    {"sub x5, x2, x1", 5, 19, 0x44},
    {"sll x5, x2, x2", 5, 24, 0x44},
    {"slli x5, x1, 4", 5, 0xFFFFFF00, 0x44},
    {"srl x5, x1, x2", 5, 0x1FFFFFFE, 0x44},
    {"srli x5, x3, 31", 5, 1, 0x44},
    {"sra x5, x1, x2", 5, 0xFFFFFFFE, 0x44},
    {"srai x5, x3, 4", 5, 0xF8000000, 0x44},
    {"and x5, x1, x2", 5, 0, 0x44},
    {"andi x5, x1, 0x7f", 5, 0x70, 0x44},
    {"or x5, x1, x2", 5, 0xFFFFFFF3, 0x44},
    {"ori x5, x2, 0x10", 5, 0x13, 0x44},
    {"xor x5, x1, x2", 5, 0xFFFFFFF3, 0x44},
    {"xori x5, x1, -1", 5, 15, 0x44},
    {"slt x5, x1, x2", 5, 1, 0x44},
    {"slti x5, x2, -1", 5, 0, 0x44},
    {"sltu x5, x1, x2", 5, 0, 0x44},
    {"sltiu x5, x2, -1", 5, 1, 0x44},
    {"lui x5, 0xfffff", 5, 0xFFFFF000, 0x44},
    {"auipc x5, 1", 5, 0x1040, 0x44},
    {"beq x2, x2, .+16", 0, 0, 0x50},
    {"bne x2, x2, .+16", 0, 0, 0x44},
    {"blt x1, x2, .-8", 0, 0, 0x38},
    {"bltu x1, x2, .-8", 0, 0, 0x44},
    {"bge x2, x1, .+8", 0, 0, 0x48},
    {"bgeu x2, x1, .+8", 0, 0, 0x44},
    {"jal x5, .+32", 5, 0x44, 0x60},
    {"jalr x5, 0x21(x2)", 5, 0x44, 0x24},
    {"lb x5, 0x101(x0)", 5, 0xFFFFFFF2, 0x44},
    {"lbu x5, 0x101(x0)", 5, 0xF2, 0x44},
    {"lh x5, 0x102(x0)", 5, 0xFFFF8081, 0x44},
    {"lhu x5, 0x102(x0)", 5, 0x8081, 0x44},
    {"lw x5, 0x100(x0)", 5, 0x8081F2F3, 0x44},
    {"fence", 0, 0, 0x44},
};

struct StoreVector {
    const char* source;
    Word word_at_0x100;
};

const StoreVector kStores[] = {
    {"sb x1, 0x103(x0)", 0xF081F2F3},
    {"sh x2, 0x100(x0)", 0x80810003},
    {"sw x3, 0x100(x0)", 0x80000000},
};

core::MachineState vector_state(const std::string& src) {
    const auto img = assembler::assemble(".org 0x40\n" + src + "\n").image;
    core::MachineConfig cfg;
    cfg.reset_pc = 0x40;
    auto s = core::make_machine(cfg, img.words, 0);
    s.rf.write(1, 0xFFFFFFF0, true);
    s.rf.write(2, 3, true);
    s.rf.write(3, 0x80000000, true);
    s.dmem.access(0x100, 0x8081F2F3, control::MemWidth::Word, false, false, true);
    return s;
}

Outcome coverage() {
    Outcome o;
    std::set<Mnemonic> seen;
    auto note = [&](const core::MachineState& s) {
        if (const auto i = isa::try_decode(s.imem->fetch(s.pc))) seen.insert(i->mnemonic);
    };

    for (const auto& path : testkit::corpus()) {
        auto s = load_program(path);
        while (s.status.is_running() && s.cycle_count < 1'000'000) {
            note(s);
            core::step_structural(s);
        }
        const auto want = testkit::parse_expectation(testkit::read_text(path)).halt;
        if (s.status.to_string() != "HALTED(" + want + ")") o.fail(path.stem().string() + " ended " + s.status.to_string());
    }

    for (auto engine : {core::Engine::Structural, core::Engine::Functional}) {
        for (const auto& v : kVectors) {
            auto s = vector_state(v.source);
            note(s);
            core::step(s, engine);
            if (!s.status.is_running() || s.pc != v.next_pc || (v.reg && s.rf.at(v.reg) != v.value)) {
                o.fail(fmt::format("{}: pc 0x{:x} x{}=0x{:x}", v.source, s.pc, v.reg, s.rf.at(v.reg)));
            }
        }
        for (const auto& v : kStores) {
            auto s = vector_state(v.source);
            note(s);
            core::step(s, engine);
            const Word got = s.dmem.access(0x100, 0, control::MemWidth::Word, false, true, false).rd;
            if (got != v.word_at_0x100 || s.pc != 0x44) o.fail(fmt::format("{}: 0x{:08x}", v.source, got));
        }
        for (auto [src, trap] : {std::pair{"ecall", TrapKind::Ecall}, std::pair{"ebreak", TrapKind::Ebreak}}) {
            auto s = vector_state(src);
            note(s);
            core::step(s, engine);
            if (!(s.status == core::Status::stopped(trap)) || s.status.state != core::RunState::Halted || s.pc != 0x40) {
                o.fail(std::string(src) + " ended " + s.status.to_string());
            }
        }
    }

    for (auto m : isa::all_mnemonics()) {
        if (!seen.count(m)) o.fail(fmt::format("{} never executed", isa::name_of(m)));
    }
    o.detail = o.ok ? fmt::format("{} mnemonics executed, 37 semantics + fence nop + 2 halts", seen.size()) : o.detail;
    return o;
}

Outcome differential() {
    Outcome o;
    std::mt19937 rng(0xD1FF);
    int states = 0, programs = 0;
    std::uint64_t cycles = 0;
    for (; states < 10000; ++states) {
        const Instruction inst = testkit::random_instruction(testkit::random_mnemonic(rng), rng);
        auto a = testkit::random_state_for(inst, rng);
        auto b = a;
        core::step_structural(a);
        core::step_functional(b);
        if (const auto d = core::first_difference(a, b); !d.empty()) {
            o.fail(fmt::format("state {} ({}): {}", states, assembler::disassemble(inst), d));
        }
    }
    for (; programs < 200; ++programs) {
        auto a = testkit::random_program_state(rng, 256);
        auto b = a;
        while (a.status.is_running() && a.cycle_count < 20000) {
            core::step_structural(a);
            core::step_functional(b);
            ++cycles;
            if (const auto d = core::first_difference(a, b); !d.empty()) {
                o.fail(fmt::format("program {} cycle {}: {}", programs, a.cycle_count, d));
                break;
            }
        }
    }
    if (o.ok) o.detail = fmt::format("{} states, {} programs, {} lockstep cycles, 0 divergences", states, programs, cycles);
    return o;
}

Outcome round_trip() {
    Outcome o;
    std::mt19937 rng(0xC0DE);
    std::map<isa::Format, std::vector<Mnemonic>> by_format;
    for (auto m : isa::all_mnemonics()) by_format[isa::format_of(m)].push_back(m);
    std::size_t sampled = 0;
    for (const auto& [f, ms] : by_format) {
        for (int k = 0; k < 10000; ++k) {
            const auto i = testkit::random_instruction(ms[k % ms.size()], rng);
            ++sampled;
            const Word w = isa::encode(i);
            if (w != testkit::oracle_encode(i) || isa::decode(w) != i) {
                o.fail(fmt::format("{} format: {}", isa::format_letter(f), assembler::disassemble(i)));
            }
        }
    }
    int legal = 0;
    for (int k = 0; k < 1000000; ++k) {
        const Word w = rng();
        if (const auto i = isa::try_decode(w)) {
            ++legal;
            if (isa::encode(*i) != w) o.fail(fmt::format("word 0x{:08x}", w));
        }
    }
    if (o.ok) o.detail = fmt::format("{} instructions over 6 formats, {} of 10^6 random words decoded", sampled, legal);
    return o;
}

Outcome adders() {
    Outcome o;
    int cases = 0;
    for (Word a = 0; a < 256; ++a)
        for (Word b = 0; b < 256; ++b)
            for (unsigned c = 0; c < 2; ++c) {
                ++cases;
                const Word total = a + b + c;
                const bits::AddResult want{{total & 0xFF, 8}, total > 0xFF};
                if (bits::ripple_add({a, 8}, {b, 8}, c) != want || bits::cla_add({a, 8}, {b, 8}, c) != want) {
                    o.fail(fmt::format("{} + {} + {}", a, b, c));
                }
            }
    std::mt19937 rng(0xADD);
    for (int k = 0; k < 100000; ++k) {
        const Word a = rng(), b = rng();
        const bool c = rng() & 1;
        if (bits::ripple_add({a, 32}, {b, 32}, c) != bits::cla_add({a, 32}, {b, 32}, c)) {
            o.fail(fmt::format("32-bit 0x{:x} + 0x{:x} + {}", a, b, c));
        }
    }
    if (o.ok) o.detail = fmt::format("{} exhaustive 8-bit cases, 100000 random 32-bit cases", cases);
    return o;
}

Outcome dabble() {
    Outcome o;
    auto check = [&](Word v, unsigned w) {
        if (display::double_dabble({v, w}).to_string() != std::to_string(v)) o.fail(std::to_string(v));
    };
    for (Word v = 0; v <= 0xFFFF; ++v) check(v, 16);
    std::mt19937 rng(0xBCD);
    for (int k = 0; k < 100000; ++k) check(rng(), 32);
    if (o.ok) o.detail = "65536 exhaustive 16-bit values, 100000 random 32-bit values";
    return o;
}

Outcome golden() {
    Outcome o;
    std::vector<std::string> done;
    for (const char* name : {"sum", "fib", "memcpy", "branch_matrix"}) {
        const auto path = testkit::programs_dir() / (std::string(name) + ".s");
        const auto expect = testkit::parse_expectation(testkit::read_text(path));
        auto s = load_program(path);

        // Record taken and not-taken outcomes of every conditional branch.
        std::set<std::pair<Mnemonic, bool>> outcomes;
        const auto t0 = Clock::now();
        while (s.status.is_running() && s.cycle_count < 1'000'000) {
            const Word pc = s.pc;
            const auto i = isa::try_decode(s.imem->fetch(pc));
            core::step_structural(s);
            if (i && isa::is_branch(i->mnemonic) && s.status.is_running()) {
                outcomes.insert({i->mnemonic, s.pc != pc + 4});
            }
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        if (secs >= 1.0) o.fail(fmt::format("{} took {:.2f} s", name, secs));
        if (s.status.to_string() != "HALTED(ECALL)") o.fail(fmt::format("{} ended {}", name, s.status.to_string()));
        for (auto [r, v] : expect.regs) {
            if (s.rf.at(r) != v) o.fail(fmt::format("{}: x{}=0x{:x}, want 0x{:x}", name, r, s.rf.at(r), v));
        }
        if (expect.out && s.dmem.output_latch() != *expect.out) o.fail(fmt::format("{}: output {}", name, s.dmem.output_latch()));
        if (std::string(name) == "branch_matrix" && outcomes.size() != 12) {
            o.fail(fmt::format("branch_matrix covered {} of 12 branch outcomes", outcomes.size()));
        }
        done.push_back(fmt::format("{} x10={}", name, s.rf.at(10)));
    }
    if (o.ok) o.detail = fmt::format("{}", fmt::join(done, ", "));
    return o;
}

Outcome images() {
    Outcome o;
    std::mt19937 rng(0x1A6E);
    for (int k = 0; k < 10000; ++k) {
        image::MemImage img;
        const std::size_t n = rng() % 300;
        while (img.words.size() < n) {
            const Word w = (rng() % 2) ? rng() : rng() % 4;
            for (unsigned r = (rng() % 3 == 0) ? rng() % 12 : 1; r > 0; --r) img.words.push_back(w);
        }
        const auto text = image::write_v2raw(img);
        const auto back = image::read_v2raw(text);
        if (back.words != img.words) o.fail(fmt::format("round trip of image {}", k));
        if (image::write_v2raw(back) != text) o.fail(fmt::format("canonical form of image {}", k));
    }
    const auto golden_path = testkit::programs_dir() / "sum.hex";
    const auto golden = image::read_v2raw(testkit::read_text(golden_path));
    const auto from_source = assembler::assemble(testkit::read_text(testkit::programs_dir() / "sum.s")).image;
    if (golden.words != from_source.words) o.fail("sum.hex differs from assembled sum.s");
    auto s = core::make_machine({}, golden.words, 0);
    core::run(s, 10000);
    if (s.status.to_string() != "HALTED(ECALL)" || s.rf.at(10) != 55) o.fail("sum.hex did not compute 55");
    if (o.ok) o.detail = "10000 random images; golden sum.hex runs to x10=55";
    return o;
}

Outcome pc_discipline() {
    Outcome o;
    std::mt19937 rng(0x9C);
    std::uint64_t cycles = 0;
    int misaligned_faults = 0;
    auto watch = [&](core::MachineState& s, std::uint64_t budget) {
        while (s.status.is_running() && budget-- > 0) {
            const auto r = core::trace_step(s);
            ++cycles;
            if (s.rf.at(0) != 0) o.fail(fmt::format("x0 nonzero at cycle {}", r.cycle));
            if (s.pc % 4 != 0) o.fail(fmt::format("pc 0x{:x} reached at cycle {}", s.pc, r.cycle));
            if (!s.status.is_running() && s.status.trap == TrapKind::MisalignedTarget) ++misaligned_faults;
        }
    };
    for (int k = 0; k < 300; ++k) {
        auto s = testkit::random_program_state(rng, 256);
        watch(s, 5000);
    }
    for (int k = 0; k < 20000; ++k) {
        const auto m = (k % 2) ? testkit::random_mnemonic(rng)
                               : std::array{Mnemonic::Jalr, Mnemonic::Jal, Mnemonic::Beq, Mnemonic::Bne}[rng() % 4];
        auto s = testkit::random_state_for(testkit::random_instruction(m, rng), rng);
        watch(s, 50);
    }
    if (misaligned_faults == 0) o.fail("fuzzing never produced a misaligned target");
    if (o.ok) o.detail = fmt::format("{} traced cycles, {} MISALIGNED_TARGET faults, x0 always 0", cycles, misaligned_faults);
    return o;
}

}  // namespace

int main() {
    criterion(1, "instruction coverage", 5, coverage);
    criterion(2, "differential equivalence", 60, differential);
    criterion(3, "encode/decode round trip", 0, round_trip);
    criterion(4, "adder oracles", 5, adders);
    criterion(5, "double dabble", 5, dabble);
    criterion(6, "golden programs", 0, golden);
    criterion(7, "image format", 0, images);
    criterion(8, "pc discipline", 0, pc_discipline);
    fmt::print("{} of 8 criteria passed\n", 8 - failures);
    return failures == 0 ? 0 : 1;
}
