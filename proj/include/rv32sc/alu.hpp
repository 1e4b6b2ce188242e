#pragma once

#include <cstdint>
#include <string_view>

#include "rv32sc/types.hpp"

namespace rv32sc::alu {

enum class AluOp : std::uint8_t { Add, Sub, Sll, Srl, Sra, And, Or, Xor, Slt, Sltu };

inline constexpr unsigned kNumAluOps = 10;

std::string_view to_string(AluOp op);

// The comparison flags come from a single a - b evaluation and are valid
// whatever op was selected; branches read them.
struct AluResult {
    Word value = 0;
    bool eq = false;
    bool lt_signed = false;
    bool lt_unsigned = false;

    friend bool operator==(const AluResult&, const AluResult&) = default;
};

AluResult alu_exec(AluOp op, Word a, Word b);

}  // namespace rv32sc::alu
