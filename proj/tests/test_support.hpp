#pragma once

// Shared test helpers: an independent field-packing encoder used as the
// oracle for isa::encode/decode, random instruction and machine-state
// generators, and access to the program corpus.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rv32sc/core.hpp"
#include "rv32sc/isa.hpp"

namespace rv32sc::testkit {

using isa::Instruction;
using isa::Mnemonic;

// Straight from the RV32I base opcode map, written out per instruction.
inline Word oracle_encode(const Instruction& i) {
    const Word rd = i.rd, rs1 = i.rs1, rs2 = i.rs2;
    const Word imm = static_cast<Word>(i.imm);

    auto r = [&](Word f7, Word f3, Word op) { return (f7 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | op; };
    auto it = [&](Word f3, Word op) { return ((imm & 0xFFF) << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | op; };
    auto sh = [&](Word f7, Word f3) { return (f7 << 25) | ((imm & 31) << 20) | (rs1 << 15) | (f3 << 12) | (rd << 7) | 0x13u; };
    auto st = [&](Word f3) {
        return (((imm >> 5) & 0x7F) << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | ((imm & 0x1F) << 7) | 0x23u;
    };
    auto br = [&](Word f3) {
        const Word b12 = (imm >> 12) & 1, b11 = (imm >> 11) & 1, b10_5 = (imm >> 5) & 0x3F, b4_1 = (imm >> 1) & 0xF;
        return (b12 << 31) | (b10_5 << 25) | (rs2 << 20) | (rs1 << 15) | (f3 << 12) | (b4_1 << 8) | (b11 << 7) | 0x63u;
    };

    switch (i.mnemonic) {
        case Mnemonic::Add: return r(0x00, 0, 0x33);
        case Mnemonic::Sub: return r(0x20, 0, 0x33);
        case Mnemonic::Sll: return r(0x00, 1, 0x33);
        case Mnemonic::Slt: return r(0x00, 2, 0x33);
        case Mnemonic::Sltu: return r(0x00, 3, 0x33);
        case Mnemonic::Xor: return r(0x00, 4, 0x33);
        case Mnemonic::Srl: return r(0x00, 5, 0x33);
        case Mnemonic::Sra: return r(0x20, 5, 0x33);
        case Mnemonic::Or: return r(0x00, 6, 0x33);
        case Mnemonic::And: return r(0x00, 7, 0x33);
        case Mnemonic::Addi: return it(0, 0x13);
        case Mnemonic::Slti: return it(2, 0x13);
        case Mnemonic::Sltiu: return it(3, 0x13);
        case Mnemonic::Xori: return it(4, 0x13);
        case Mnemonic::Ori: return it(6, 0x13);
        case Mnemonic::Andi: return it(7, 0x13);
        case Mnemonic::Slli: return sh(0x00, 1);
        case Mnemonic::Srli: return sh(0x00, 5);
        case Mnemonic::Srai: return sh(0x20, 5);
        case Mnemonic::Lb: return it(0, 0x03);
        case Mnemonic::Lh: return it(1, 0x03);
        case Mnemonic::Lw: return it(2, 0x03);
        case Mnemonic::Lbu: return it(4, 0x03);
        case Mnemonic::Lhu: return it(5, 0x03);
        case Mnemonic::Sb: return st(0);
        case Mnemonic::Sh: return st(1);
        case Mnemonic::Sw: return st(2);
        case Mnemonic::Beq: return br(0);
        case Mnemonic::Bne: return br(1);
        case Mnemonic::Blt: return br(4);
        case Mnemonic::Bge: return br(5);
        case Mnemonic::Bltu: return br(6);
        case Mnemonic::Bgeu: return br(7);
        case Mnemonic::Jalr: return it(0, 0x67);
        case Mnemonic::Jal: {
            const Word b20 = (imm >> 20) & 1, b10_1 = (imm >> 1) & 0x3FF, b11 = (imm >> 11) & 1, b19_12 = (imm >> 12) & 0xFF;
            return (b20 << 31) | (b10_1 << 21) | (b11 << 20) | (b19_12 << 12) | (rd << 7) | 0x6Fu;
        }
        case Mnemonic::Lui: return (imm & 0xFFFFF000u) | (rd << 7) | 0x37u;
        case Mnemonic::Auipc: return (imm & 0xFFFFF000u) | (rd << 7) | 0x17u;
        case Mnemonic::Fence: return ((imm & 0xFF) << 20) | 0x0Fu;
        case Mnemonic::Ecall: return 0x00000073u;
        case Mnemonic::Ebreak: return 0x00100073u;
    }
    return 0;
}

// A legal instruction with uniformly random fields for its format.
template <typename Rng>
Instruction random_instruction(Mnemonic m, Rng& rng) {
    auto uni = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    auto reg = [&] { return static_cast<std::uint8_t>(uni(0, 31)); };

    Instruction i{m, 0, 0, 0, 0};
    if (m == Mnemonic::Fence) {
        i.imm = static_cast<SWord>(uni(0, 255));
        return i;
    }
    if (isa::is_system(m)) return i;
    switch (isa::format_of(m)) {
        case isa::Format::R:
            i.rd = reg();
            i.rs1 = reg();
            i.rs2 = reg();
            break;
        case isa::Format::I:
            i.rd = reg();
            i.rs1 = reg();
            i.imm = static_cast<SWord>(isa::is_shift_imm(m) ? uni(0, 31) : uni(-2048, 2047));
            break;
        case isa::Format::S:
            i.rs1 = reg();
            i.rs2 = reg();
            i.imm = static_cast<SWord>(uni(-2048, 2047));
            break;
        case isa::Format::B:
            i.rs1 = reg();
            i.rs2 = reg();
            i.imm = static_cast<SWord>(2 * uni(-2048, 2047));
            break;
        case isa::Format::U:
            i.rd = reg();
            i.imm = static_cast<SWord>(static_cast<Word>(uni(0, 0xFFFFF)) << 12);
            break;
        case isa::Format::J:
            i.rd = reg();
            i.imm = static_cast<SWord>(2 * uni(-(1 << 19), (1 << 19) - 1));
            break;
    }
    return i;
}

template <typename Rng>
Mnemonic random_mnemonic(Rng& rng) {
    const auto& all = isa::all_mnemonics();
    return all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
}

// A machine whose pc points at `inst`, with random registers, data memory
// and surrounding instruction words. Base registers of memory instructions
// are biased so most accesses land in data memory or on the display latch,
// and jalr bases so targets mostly stay inside instruction memory.
template <typename Rng>
core::MachineState random_state_for(const Instruction& inst, Rng& rng, const core::MachineConfig& cfg = {}) {
    auto word = [&] { return static_cast<Word>(rng()); };
    const Word imem_words = cfg.imem_bytes / 4;
    const Word pc = 4 * std::uniform_int_distribution<Word>(0, imem_words - 1)(rng);

    std::vector<Word> program(imem_words);
    for (auto& w : program) w = (rng() % 2) ? word() : isa::encode(random_instruction(random_mnemonic(rng), rng));
    program[pc / 4] = isa::encode(inst);

    core::MachineConfig c = cfg;
    c.reset_pc = pc;
    auto s = core::make_machine(c, program, 0);
    for (unsigned r = 1; r < kNumRegisters; ++r) s.rf.write(r, word(), true);
    for (auto& b : s.dmem.bytes()) b = static_cast<std::uint8_t>(rng());
    s.dmem.set_output_latch(word());

    const bool mem = isa::is_load(inst.mnemonic) || isa::is_store(inst.mnemonic);
    if (inst.rs1 != 0 && rng() % 8 != 0) {
        Word target = 0;
        if (mem) {
            const unsigned pick = rng() % 10;
            if (pick == 0) {
                target = s.dmem.display_addr() + (rng() % 4);
            } else {
                target = std::uniform_int_distribution<Word>(0, s.dmem.size_bytes() - 1)(rng);
                if (rng() % 4 != 0) target &= ~3u;  // mostly aligned
            }
            s.rf.write(inst.rs1, target - static_cast<Word>(inst.imm), true);
        } else if (inst.mnemonic == Mnemonic::Jalr) {
            target = std::uniform_int_distribution<Word>(0, cfg.imem_bytes - 1)(rng);
            s.rf.write(inst.rs1, target - static_cast<Word>(inst.imm), true);
        } else if (rng() % 3 == 0 && inst.rs2 != 0) {
            s.rf.write(inst.rs2, s.rf.at(inst.rs1), true);  // exercise equality
        }
    }
    return s;
}

// Random program of up to max_len instructions ending in ecall. Branch and
// jump offsets are kept inside the program; registers x1..x7 are seeded
// with data-memory addresses so loads and stores mostly succeed.
template <typename Rng>
core::MachineState random_program_state(Rng& rng, std::size_t max_len, const core::MachineConfig& cfg = {}) {
    const std::size_t len = std::uniform_int_distribution<std::size_t>(2, max_len)(rng);
    std::vector<Word> program;
    for (std::size_t k = 0; k + 1 < len; ++k) {
        Mnemonic m = random_mnemonic(rng);
        if (isa::is_system(m) && rng() % 4 != 0) m = Mnemonic::Addi;
        Instruction i = random_instruction(m, rng);
        const auto pc = static_cast<std::int64_t>(4 * k);
        if (isa::is_branch(m) || m == Mnemonic::Jal) {
            std::int64_t target = 4 * std::uniform_int_distribution<std::int64_t>(0, static_cast<std::int64_t>(len) - 1)(rng);
            if (rng() % 16 == 0) target += 2;  // occasionally misaligned
            i.imm = static_cast<SWord>(target - pc);
            if (m != Mnemonic::Jal && (i.imm < -4096 || i.imm > 4094)) i.imm = 4;
        }
        if (isa::is_load(m) || isa::is_store(m)) {
            i.rs1 = static_cast<std::uint8_t>(1 + rng() % 7);
            i.imm = static_cast<SWord>(std::uniform_int_distribution<int>(-64, 64)(rng));
        }
        if (m == Mnemonic::Jalr) {
            i.rs1 = 0;
            i.imm = static_cast<SWord>(4 * std::uniform_int_distribution<std::int64_t>(0, static_cast<std::int64_t>(len) - 1)(rng));
        }
        // Keep the address registers intact most of the time.
        if (i.rd >= 1 && i.rd <= 7 && rng() % 4 != 0) i.rd = static_cast<std::uint8_t>(8 + rng() % 24);
        program.push_back(isa::encode(i));
    }
    program.push_back(isa::encode({Mnemonic::Ecall, 0, 0, 0, 0}));

    auto s = core::make_machine(cfg, program, 0);
    for (unsigned r = 1; r <= 7; ++r) {
        s.rf.write(r, 128 + 4 * std::uniform_int_distribution<Word>(0, (cfg.dmem_bytes - 256) / 4)(rng), true);
    }
    if (rng() % 4 == 0) s.rf.write(7, s.dmem.display_addr(), true);
    for (unsigned r = 8; r < kNumRegisters; ++r) s.rf.write(r, static_cast<Word>(rng()), true);
    for (auto& b : s.dmem.bytes()) b = static_cast<std::uint8_t>(rng());
    return s;
}

inline std::filesystem::path programs_dir() { return RV32SC_PROGRAMS_DIR; }

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::vector<std::filesystem::path> corpus() {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(programs_dir())) {
        if (e.path().extension() == ".s") out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

// `# expect: halt=ECALL x10=55 out=55` header of a corpus program.
struct Expectation {
    std::string halt;
    std::map<unsigned, Word> regs;
    std::optional<Word> out;
};

inline Expectation parse_expectation(const std::string& text) {
    Expectation e;
    const auto at = text.find("# expect:");
    if (at == std::string::npos) return e;
    std::istringstream line(text.substr(at + 9, text.find('\n', at) - at - 9));
    std::string tok;
    while (line >> tok) {
        const auto eq = tok.find('=');
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "halt") {
            e.halt = val;
        } else {
            const auto v = static_cast<Word>(std::stoll(val, nullptr, 0));
            if (key == "out") {
                e.out = v;
            } else {
                e.regs[static_cast<unsigned>(std::stoul(key.substr(1)))] = v;
            }
        }
    }
    return e;
}

}  // namespace rv32sc::testkit
