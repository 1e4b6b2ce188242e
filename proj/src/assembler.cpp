#include "rv32sc/assembler.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include <fmt/format.h>

namespace rv32sc::assembler {

using isa::Format;
using isa::Instruction;
using isa::Mnemonic;
using Kind = Diagnostic::Kind;

std::string_view to_string(Kind k) {
    switch (k) {
        case Kind::Syntax: return "syntax error";
        case Kind::BadRegister: return "bad register";
        case Kind::UnknownMnemonic: return "unknown mnemonic";
        case Kind::UndefinedLabel: return "undefined label";
        case Kind::DuplicateLabel: return "duplicate label";
        case Kind::ImmediateRange: return "immediate out of range";
        case Kind::BranchOutOfRange: return "branch out of range";
    }
    return "error";
}

std::string Diagnostic::to_string() const {
    return fmt::format("{}:{}: {}: {}", line, column, assembler::to_string(kind), message);
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
    std::string out;
    for (const auto& d : diags) {
        if (!out.empty()) out += '\n';
        out += d.to_string();
    }
    return out;
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }
bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_identifier(std::string_view s) {
    return !s.empty() && is_ident_start(s[0]) && std::all_of(s.begin(), s.end(), is_ident_char);
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

// Integer literal: optional sign, then decimal, 0x hex or 0b binary.
std::optional<std::int64_t> parse_int(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    int base = 10;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
        base = 16;
        s.remove_prefix(2);
    } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
        base = 2;
        s.remove_prefix(2);
    }
    if (s.empty()) return std::nullopt;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
    if (ec != std::errc{} || p != s.data() + s.size() || v > (std::uint64_t{1} << 40)) return std::nullopt;
    const auto sv = static_cast<std::int64_t>(v);
    return neg ? -sv : sv;
}

std::optional<std::uint8_t> parse_register(std::string_view s) {
    const std::string l = lower(s);
    if (l.size() < 2 || l.size() > 3 || l[0] != 'x') return std::nullopt;
    unsigned n = 0;
    const auto [p, ec] = std::from_chars(l.data() + 1, l.data() + l.size(), n);
    if (ec != std::errc{} || p != l.data() + l.size() || n >= kNumRegisters) return std::nullopt;
    if (l.size() == 3 && l[1] == '0') return std::nullopt;  // no x05
    return static_cast<std::uint8_t>(n);
}

SourceLine parse_line(std::string_view text, unsigned line_no, std::vector<Diagnostic>& diags) {
    SourceLine out;
    out.line = line_no;

    std::size_t cut = text.size();
    if (const auto h = text.find('#'); h != std::string_view::npos) cut = h;
    if (const auto s = text.find("//"); s != std::string_view::npos) cut = std::min(cut, s);
    text = text.substr(0, cut);

    std::size_t i = 0;
    auto skip_space = [&] {
        while (i < text.size() && is_space(text[i])) ++i;
    };

    // Labels.
    while (true) {
        skip_space();
        std::size_t j = i;
        while (j < text.size() && is_ident_char(text[j])) ++j;
        std::size_t k = j;
        while (k < text.size() && is_space(text[k])) ++k;
        if (j > i && k < text.size() && text[k] == ':') {
            const std::string_view name = text.substr(i, j - i);
            if (!is_identifier(name)) {
                diags.push_back({Kind::Syntax, line_no, static_cast<unsigned>(i + 1),
                                 fmt::format("invalid label name '{}'", name)});
            } else {
                out.labels.emplace_back(name);
            }
            i = k + 1;
            continue;
        }
        break;
    }

    skip_space();
    if (i >= text.size()) return out;

    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    out.op = lower(text.substr(i, j - i));
    out.op_column = static_cast<unsigned>(i + 1);
    i = j;

    skip_space();
    if (i >= text.size()) return out;

    while (true) {
        std::size_t end = text.find(',', i);
        const bool last = end == std::string_view::npos;
        if (last) end = text.size();
        std::size_t a = i;
        while (a < end && is_space(text[a])) ++a;
        std::size_t b = end;
        while (b > a && is_space(text[b - 1])) --b;
        if (a == b) {
            diags.push_back({Kind::Syntax, line_no, static_cast<unsigned>(a + 1), "empty operand"});
        } else {
            out.operands.push_back({std::string(text.substr(a, b - a)), static_cast<unsigned>(a + 1)});
        }
        if (last) break;
        i = end + 1;
    }
    return out;
}

struct Located {
    const SourceLine* line;
    Word address;
};

class Encoder {
public:
    Encoder(const SymbolTable& symbols, std::vector<Diagnostic>& diags) : symbols_(symbols), diags_(diags) {}

    std::optional<Word> encode_line(const SourceLine& l, Word pc);
    std::optional<Word> word_value(const SourceLine& l, const Operand& op);

private:
    void error(Kind k, unsigned column, std::string msg) { diags_.push_back({k, line_->line, column, std::move(msg)}); }

    std::optional<std::uint8_t> reg(const Operand& op);
    std::optional<std::int64_t> integer(const Operand& op);
    std::optional<SWord> imm_in(const Operand& op, std::int64_t lo, std::int64_t hi);
    std::optional<std::pair<SWord, std::uint8_t>> mem_operand(const Operand& op);
    std::optional<SWord> target(const Operand& op, Mnemonic m, Word pc);
    std::optional<SWord> fence_set(const Operand& op);
    bool arity(const SourceLine& l, std::size_t n);

    const SymbolTable& symbols_;
    std::vector<Diagnostic>& diags_;
    const SourceLine* line_ = nullptr;
};

bool Encoder::arity(const SourceLine& l, std::size_t n) {
    if (l.operands.size() == n) return true;
    error(Kind::Syntax, l.op_column, fmt::format("'{}' takes {} operand{}, got {}", l.op, n, n == 1 ? "" : "s",
                                                 l.operands.size()));
    return false;
}

std::optional<std::uint8_t> Encoder::reg(const Operand& op) {
    if (auto r = parse_register(op.text)) return r;
    error(Kind::BadRegister, op.column, fmt::format("expected register x0..x31, got '{}'", op.text));
    return std::nullopt;
}

std::optional<std::int64_t> Encoder::integer(const Operand& op) {
    if (auto v = parse_int(op.text)) return v;
    error(Kind::Syntax, op.column, fmt::format("expected integer, got '{}'", op.text));
    return std::nullopt;
}

std::optional<SWord> Encoder::imm_in(const Operand& op, std::int64_t lo, std::int64_t hi) {
    const auto v = integer(op);
    if (!v) return std::nullopt;
    if (*v < lo || *v > hi) {
        error(Kind::ImmediateRange, op.column, fmt::format("{} not in [{}, {}]", *v, lo, hi));
        return std::nullopt;
    }
    return static_cast<SWord>(*v);
}

// `imm(xN)` or `(xN)`.
std::optional<std::pair<SWord, std::uint8_t>> Encoder::mem_operand(const Operand& op) {
    const std::string_view t = op.text;
    const auto open = t.find('(');
    if (open == std::string_view::npos || t.back() != ')') {
        error(Kind::Syntax, op.column, fmt::format("expected imm(xN), got '{}'", op.text));
        return std::nullopt;
    }
    std::string_view imm_text = t.substr(0, open);
    while (!imm_text.empty() && is_space(imm_text.back())) imm_text.remove_suffix(1);
    std::string_view reg_text = t.substr(open + 1, t.size() - open - 2);
    while (!reg_text.empty() && is_space(reg_text.front())) reg_text.remove_prefix(1);
    while (!reg_text.empty() && is_space(reg_text.back())) reg_text.remove_suffix(1);

    const auto r = reg({std::string(reg_text), op.column + static_cast<unsigned>(open) + 1});
    std::optional<SWord> imm = 0;
    if (!imm_text.empty()) imm = imm_in({std::string(imm_text), op.column}, -2048, 2047);
    if (!r || !imm) return std::nullopt;
    return std::pair{*imm, *r};
}

std::optional<SWord> Encoder::target(const Operand& op, Mnemonic m, Word pc) {
    std::int64_t offset = 0;
    const std::string_view t = op.text;
    if (t.size() >= 2 && t[0] == '.' && (t[1] == '+' || t[1] == '-')) {
        auto v = parse_int(t.substr(1));
        if (!v) {
            error(Kind::Syntax, op.column, fmt::format("bad relative target '{}'", op.text));
            return std::nullopt;
        }
        offset = *v;
    } else if (auto v = parse_int(t)) {
        offset = *v;
    } else if (is_identifier(t)) {
        const auto it = symbols_.find(std::string(t));
        if (it == symbols_.end()) {
            error(Kind::UndefinedLabel, op.column, fmt::format("undefined label '{}'", op.text));
            return std::nullopt;
        }
        offset = static_cast<std::int64_t>(it->second) - static_cast<std::int64_t>(pc);
    } else {
        error(Kind::Syntax, op.column, fmt::format("bad branch target '{}'", op.text));
        return std::nullopt;
    }

    const auto range = isa::imm_range(m);
    if (offset < range.min || offset > range.max) {
        error(Kind::BranchOutOfRange, op.column,
              fmt::format("target offset {} outside [{}, {}]", offset, range.min, range.max));
        return std::nullopt;
    }
    if (offset % 2 != 0) {
        error(Kind::ImmediateRange, op.column, fmt::format("target offset {} is odd", offset));
        return std::nullopt;
    }
    return static_cast<SWord>(offset);
}

// Subset of "iorw" -> 4-bit mask, or "0".
std::optional<SWord> Encoder::fence_set(const Operand& op) {
    if (op.text == "0") return 0;
    SWord mask = 0;
    for (const char c : lower(op.text)) {
        SWord bit = 0;
        switch (c) {
            case 'i': bit = 8; break;
            case 'o': bit = 4; break;
            case 'r': bit = 2; break;
            case 'w': bit = 1; break;
            default: break;
        }
        if (bit == 0 || (mask & bit) != 0) {
            error(Kind::Syntax, op.column, fmt::format("bad fence set '{}'", op.text));
            return std::nullopt;
        }
        mask |= bit;
    }
    return mask;
}

std::optional<Word> Encoder::word_value(const SourceLine& l, const Operand& op) {
    line_ = &l;
    if (is_identifier(op.text)) {
        const auto it = symbols_.find(op.text);
        if (it == symbols_.end()) {
            error(Kind::UndefinedLabel, op.column, fmt::format("undefined label '{}'", op.text));
            return std::nullopt;
        }
        return it->second;
    }
    const auto v = imm_in(op, -(std::int64_t{1} << 31), (std::int64_t{1} << 32) - 1);
    if (!v) return std::nullopt;
    return static_cast<Word>(*v);
}

std::optional<Word> Encoder::encode_line(const SourceLine& l, Word pc) {
    line_ = &l;
    const auto& ops = l.operands;

    if (l.op == "nop") {
        if (!arity(l, 0)) return std::nullopt;
        return isa::encode({Mnemonic::Addi, 0, 0, 0, 0});
    }

    const auto m = isa::mnemonic_from_name(l.op);
    if (!m) {
        error(Kind::UnknownMnemonic, l.op_column, fmt::format("unknown mnemonic '{}'", l.op));
        return std::nullopt;
    }

    Instruction in{*m, 0, 0, 0, 0};
    bool ok = true;
    auto take = [&](auto opt, auto& dst) {
        if (opt) {
            dst = *opt;
        } else {
            ok = false;
        }
    };

    if (*m == Mnemonic::Fence) {
        if (ops.empty()) {
            in.imm = 0xFF;
        } else if (arity(l, 2)) {
            SWord pred = 0;
            SWord succ = 0;
            take(fence_set(ops[0]), pred);
            take(fence_set(ops[1]), succ);
            in.imm = (pred << 4) | succ;
        } else {
            ok = false;
        }
    } else if (isa::is_system(*m)) {
        ok = arity(l, 0);
    } else if (isa::is_load(*m)) {
        if (!arity(l, 2)) return std::nullopt;
        take(reg(ops[0]), in.rd);
        if (auto mo = mem_operand(ops[1])) {
            in.imm = mo->first;
            in.rs1 = mo->second;
        } else {
            ok = false;
        }
    } else if (isa::is_store(*m)) {
        if (!arity(l, 2)) return std::nullopt;
        take(reg(ops[0]), in.rs2);
        if (auto mo = mem_operand(ops[1])) {
            in.imm = mo->first;
            in.rs1 = mo->second;
        } else {
            ok = false;
        }
    } else if (*m == Mnemonic::Jalr) {
        // jalr rd, imm(rs1)  |  jalr rd, rs1, imm
        if (ops.size() == 2) {
            take(reg(ops[0]), in.rd);
            if (auto mo = mem_operand(ops[1])) {
                in.imm = mo->first;
                in.rs1 = mo->second;
            } else {
                ok = false;
            }
        } else if (arity(l, 3)) {
            take(reg(ops[0]), in.rd);
            take(reg(ops[1]), in.rs1);
            take(imm_in(ops[2], -2048, 2047), in.imm);
        } else {
            ok = false;
        }
    } else {
        switch (isa::format_of(*m)) {
            case Format::R:
                if (!arity(l, 3)) return std::nullopt;
                take(reg(ops[0]), in.rd);
                take(reg(ops[1]), in.rs1);
                take(reg(ops[2]), in.rs2);
                break;
            case Format::I: {
                if (!arity(l, 3)) return std::nullopt;
                take(reg(ops[0]), in.rd);
                take(reg(ops[1]), in.rs1);
                const auto range = isa::imm_range(*m);
                take(imm_in(ops[2], range.min, range.max), in.imm);
                break;
            }
            case Format::B:
                if (!arity(l, 3)) return std::nullopt;
                take(reg(ops[0]), in.rs1);
                take(reg(ops[1]), in.rs2);
                take(target(ops[2], *m, pc), in.imm);
                break;
            case Format::U: {
                if (!arity(l, 2)) return std::nullopt;
                take(reg(ops[0]), in.rd);
                SWord upper = 0;
                take(imm_in(ops[1], -(1 << 19), (1 << 20) - 1), upper);
                in.imm = static_cast<SWord>(static_cast<Word>(upper) << 12);
                break;
            }
            case Format::J:
                if (!arity(l, 2)) return std::nullopt;
                take(reg(ops[0]), in.rd);
                take(target(ops[1], *m, pc), in.imm);
                break;
            case Format::S:
                break;  // handled above
        }
    }
    if (!ok) return std::nullopt;

    try {
        return isa::encode(in);
    } catch (const isa::IsaError& e) {
        error(e.kind() == isa::IsaError::Kind::ImmediateRange ? Kind::ImmediateRange : Kind::Syntax, l.op_column,
              e.what());
        return std::nullopt;
    }
}

std::string hex_upper20(SWord imm) { return fmt::format("0x{:x}", static_cast<Word>(imm) >> 12); }

std::string relative(SWord offset) { return offset < 0 ? fmt::format(".{}", offset) : fmt::format(".+{}", offset); }

std::string fence_set_text(unsigned mask) {
    if (mask == 0) return "0";
    std::string out;
    if (mask & 8u) out += 'i';
    if (mask & 4u) out += 'o';
    if (mask & 2u) out += 'r';
    if (mask & 1u) out += 'w';
    return out;
}

}  // namespace

AsmError::AsmError(std::vector<Diagnostic> diags) : std::runtime_error(join_diagnostics(diags)), diags_(std::move(diags)) {}

SourceProgram parse(std::string_view text) {
    SourceProgram prog;
    std::vector<Diagnostic> diags;
    unsigned line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto end = nl == std::string_view::npos ? text.size() : nl;
        ++line_no;
        auto line = parse_line(text.substr(pos, end - pos), line_no, diags);
        if (!line.labels.empty() || !line.op.empty()) prog.lines.push_back(std::move(line));
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    if (!diags.empty()) throw AsmError(std::move(diags));
    return prog;
}

Assembly assemble(const SourceProgram& src, Word origin) {
    if (origin % 4 != 0) throw std::invalid_argument("assembly origin must be word-aligned");

    std::vector<Diagnostic> diags;
    Assembly out;
    out.image.origin = origin;

    // Pass 1: addresses and symbols.
    std::vector<Located> placed;
    std::uint64_t addr = origin;
    for (const auto& l : src.lines) {
        for (const auto& label : l.labels) {
            if (!out.symbols.emplace(label, static_cast<Word>(addr)).second) {
                diags.push_back({Kind::DuplicateLabel, l.line, 1, fmt::format("label '{}' already defined", label)});
            }
        }
        if (l.op.empty()) continue;
        if (l.op == ".org") {
            const auto v = l.operands.size() == 1 ? parse_int(l.operands[0].text) : std::nullopt;
            const unsigned col = l.operands.empty() ? l.op_column : l.operands[0].column;
            if (!v) {
                diags.push_back({Kind::Syntax, l.line, col, "'.org' takes one integer address"});
            } else if (*v < 0 || *v > 0xFFFFFFFFll || *v % 4 != 0 || static_cast<std::uint64_t>(*v) < addr) {
                diags.push_back({Kind::ImmediateRange, l.line, col,
                                 fmt::format("'.org {}' must be word-aligned and not below 0x{:x}", *v, addr)});
            } else {
                addr = static_cast<std::uint64_t>(*v);
            }
            continue;
        }
        if (l.op == ".word") {
            if (l.operands.empty()) diags.push_back({Kind::Syntax, l.line, l.op_column, "'.word' needs a value"});
            placed.push_back({&l, static_cast<Word>(addr)});
            addr += 4 * l.operands.size();
            continue;
        }
        if (l.op[0] == '.') {
            diags.push_back({Kind::Syntax, l.line, l.op_column, fmt::format("unknown directive '{}'", l.op)});
            continue;
        }
        placed.push_back({&l, static_cast<Word>(addr)});
        addr += 4;
    }
    if (addr - origin > image::kMaxImageWords * 4 || addr > 0x100000000ull) {
        diags.push_back({Kind::ImmediateRange, 0, 0, "program exceeds the address space"});
        throw AsmError(std::move(diags));
    }

    // Pass 2: encoding.
    Encoder enc(out.symbols, diags);
    auto& words = out.image.words;
    words.assign(static_cast<std::size_t>((addr - origin) / 4), 0);
    for (const auto& [line, at] : placed) {
        const std::size_t index = (at - origin) / 4;
        if (line->op == ".word") {
            for (std::size_t k = 0; k < line->operands.size(); ++k) {
                if (auto v = enc.word_value(*line, line->operands[k])) words[index + k] = *v;
            }
        } else if (auto w = enc.encode_line(*line, at)) {
            words[index] = *w;
        }
    }

    if (!diags.empty()) {
        std::stable_sort(diags.begin(), diags.end(),
                         [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
        throw AsmError(std::move(diags));
    }
    return out;
}

Assembly assemble(std::string_view text, Word origin) { return assemble(parse(text), origin); }

std::string disassemble(const Instruction& i) {
    const auto name = isa::name_of(i.mnemonic);
    const Mnemonic m = i.mnemonic;

    if (m == Mnemonic::Fence) {
        if (i.imm == 0xFF) return "fence";
        return fmt::format("fence {}, {}", fence_set_text((i.imm >> 4) & 0xF), fence_set_text(i.imm & 0xF));
    }
    if (isa::is_system(m)) return std::string(name);
    if (isa::is_load(m) || m == Mnemonic::Jalr) return fmt::format("{} x{}, {}(x{})", name, i.rd, i.imm, i.rs1);
    if (isa::is_store(m)) return fmt::format("{} x{}, {}(x{})", name, i.rs2, i.imm, i.rs1);

    switch (isa::format_of(m)) {
        case Format::R: return fmt::format("{} x{}, x{}, x{}", name, i.rd, i.rs1, i.rs2);
        case Format::I: return fmt::format("{} x{}, x{}, {}", name, i.rd, i.rs1, i.imm);
        case Format::B: return fmt::format("{} x{}, x{}, {}", name, i.rs1, i.rs2, relative(i.imm));
        case Format::U: return fmt::format("{} x{}, {}", name, i.rd, hex_upper20(i.imm));
        case Format::J: return fmt::format("{} x{}, {}", name, i.rd, relative(i.imm));
        case Format::S: break;
    }
    return std::string(name);
}

std::string disassemble(Word w, Word pc) {
    const auto i = isa::try_decode(w);
    if (!i) return fmt::format(".word 0x{:08x}", w);
    std::string text = disassemble(*i);
    const Format f = isa::format_of(i->mnemonic);
    if (f == Format::B || f == Format::J) text += fmt::format("  # 0x{:08x}", pc + static_cast<Word>(i->imm));
    return text;
}

std::string disassemble_image(const image::MemImage& img) {
    std::string out;
    if (img.origin != 0) out += fmt::format(".org 0x{:x}\n", img.origin);
    Word pc = img.origin;
    for (const Word w : img.words) {
        out += disassemble(w, pc);
        out += '\n';
        pc += 4;
    }
    return out;
}

}  // namespace rv32sc::assembler
