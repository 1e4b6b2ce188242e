#pragma once

// Two-pass assembler and disassembler for the RV32I subset.
//
// Syntax: one statement per line, optional `label:` prefixes, `#` or `//`
// comments. Registers are x0..x31. Loads and stores take `imm(xN)`; branch
// and jal targets are labels, `.+N` / `.-N` pc-relative offsets, or plain
// integer offsets. Directives: `.org addr` (forward only, gap zero-filled)
// and `.word v[, v...]` where v is an integer or a label. The only
// pseudo-instruction is `nop`.

#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rv32sc/image.hpp"
#include "rv32sc/isa.hpp"
#include "rv32sc/types.hpp"

namespace rv32sc::assembler {

struct Operand {
    std::string text;
    unsigned column = 0;
};

struct SourceLine {
    unsigned line = 0;
    std::vector<std::string> labels;
    std::string op;  // mnemonic or directive; empty for label-only lines
    unsigned op_column = 0;
    std::vector<Operand> operands;
};

struct SourceProgram {
    std::vector<SourceLine> lines;
};

using SymbolTable = std::unordered_map<std::string, Word>;

struct Diagnostic {
    enum class Kind {
        Syntax,
        BadRegister,
        UnknownMnemonic,
        UndefinedLabel,
        DuplicateLabel,
        ImmediateRange,
        BranchOutOfRange,
    };
    Kind kind;
    unsigned line;
    unsigned column;
    std::string message;

    std::string to_string() const;
};

std::string_view to_string(Diagnostic::Kind k);

class AsmError : public std::runtime_error {
public:
    explicit AsmError(std::vector<Diagnostic> diags);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diags_; }

private:
    std::vector<Diagnostic> diags_;
};

// Splits text into lines, labels and operands. Throws AsmError on lexical errors.
SourceProgram parse(std::string_view text);

struct Assembly {
    image::MemImage image;
    SymbolTable symbols;
};

// Throws AsmError carrying every diagnostic found. origin must be 4-aligned.
Assembly assemble(const SourceProgram& src, Word origin = 0);
Assembly assemble(std::string_view text, Word origin = 0);

// Canonical text for one instruction. Branch and jal targets are written as
// `.+N`/`.-N`.
std::string disassemble(const isa::Instruction& i);

// As above for a raw word fetched at pc; illegal words become `.word 0x........`.
// Branch and jump lines carry the absolute target as a trailing comment.
std::string disassemble(Word w, Word pc);

// Whole image as reassemblable source, one line per word, preceded by
// `.org` when the origin is nonzero.
std::string disassemble_image(const image::MemImage& img);

}  // namespace rv32sc::assembler
