#pragma once

// Bit-level arithmetic primitives: fixed-width bit vectors, adders and
// extension units. Everything here is a pure function.

#include <cstdint>
#include <stdexcept>

#include "rv32sc/types.hpp"

namespace rv32sc::bits {

class BitsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr unsigned kMaxWidth = 32;

constexpr Word width_mask(unsigned width) {
    return width >= 32 ? 0xFFFFFFFFu : ((Word{1} << width) - 1u);
}

// An unsigned value occupying the low `width` bits, 1 <= width <= 32.
class BitVec {
public:
    // Throws BitsError when width is out of range or value does not fit.
    BitVec(Word value, unsigned width);

    // Keeps only the low `width` bits of value.
    static BitVec truncate(Word value, unsigned width);

    Word value() const noexcept { return value_; }
    unsigned width() const noexcept { return width_; }
    bool bit(unsigned i) const noexcept { return i < width_ && ((value_ >> i) & 1u) != 0; }
    bool msb() const noexcept { return bit(width_ - 1); }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    Word value_;
    unsigned width_;
};

struct FullAddResult {
    bool sum;
    bool cout;
    friend bool operator==(const FullAddResult&, const FullAddResult&) = default;
};

struct AddResult {
    BitVec sum;
    bool cout;
    friend bool operator==(const AddResult&, const AddResult&) = default;
};

FullAddResult full_add(bool a, bool b, bool cin);

// Chain of full adders, bit 0 upward.
AddResult ripple_add(const BitVec& a, const BitVec& b, bool cin);

// Carry lookahead: per-bit generate/propagate terms are combined with a
// parallel prefix (Kogge-Stone) network, so every carry is a function of
// the operands and cin alone rather than of the previous sum bit.
AddResult cla_add(const BitVec& a, const BitVec& b, bool cin);

BitVec sign_extend(const BitVec& v, unsigned to_width);
BitVec zero_extend(const BitVec& v, unsigned to_width);

// Bits hi..lo of w, inclusive.
BitVec extract_field(Word w, unsigned hi, unsigned lo);

}  // namespace rv32sc::bits
