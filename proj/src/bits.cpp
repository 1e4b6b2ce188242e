#include "rv32sc/bits.hpp"

#include <string>

namespace rv32sc::bits {

namespace {

void check_width(unsigned width) {
    if (width == 0 || width > kMaxWidth) {
        throw BitsError("bit width must be in 1..32, got " + std::to_string(width));
    }
}

void check_same_width(const BitVec& a, const BitVec& b) {
    if (a.width() != b.width()) {
        throw BitsError("adder operand widths differ: " + std::to_string(a.width()) + " vs " +
                        std::to_string(b.width()));
    }
}

}  // namespace

BitVec::BitVec(Word value, unsigned width) : value_(value), width_(width) {
    check_width(width);
    if ((value & ~width_mask(width)) != 0) {
        throw BitsError("value does not fit in " + std::to_string(width) + " bits");
    }
}

BitVec BitVec::truncate(Word value, unsigned width) {
    check_width(width);
    return BitVec(value & width_mask(width), width);
}

FullAddResult full_add(bool a, bool b, bool cin) {
    const bool half = a != b;
    return {half != cin, (a && b) || (half && cin)};
}

AddResult ripple_add(const BitVec& a, const BitVec& b, bool cin) {
    check_same_width(a, b);
    Word sum = 0;
    bool carry = cin;
    for (unsigned i = 0; i < a.width(); ++i) {
        const auto fa = full_add(a.bit(i), b.bit(i), carry);
        sum |= Word{fa.sum} << i;
        carry = fa.cout;
    }
    return {BitVec(sum, a.width()), carry};
}

AddResult cla_add(const BitVec& a, const BitVec& b, bool cin) {
    check_same_width(a, b);
    const unsigned width = a.width();
    const Word mask = width_mask(width);

    const Word propagate = (a.value() ^ b.value()) & mask;
    // Group terms: after the prefix pass, bit i of gen/prop describes the span 0..i.
    Word gen = a.value() & b.value() & mask;
    Word prop = propagate;
    for (unsigned span = 1; span < width; span <<= 1) {
        gen |= prop & (gen << span);
        prop &= (prop << span) | width_mask(span);
    }

    const Word cin_mask = cin ? mask : 0u;
    const Word carry_out_of = (gen | (prop & cin_mask)) & mask;  // carry leaving bit i
    const Word carry_into = ((carry_out_of << 1) | Word{cin}) & mask;

    return {BitVec((propagate ^ carry_into) & mask, width), ((carry_out_of >> (width - 1)) & 1u) != 0};
}

BitVec sign_extend(const BitVec& v, unsigned to_width) {
    check_width(to_width);
    if (to_width < v.width()) {
        throw BitsError("sign_extend cannot narrow " + std::to_string(v.width()) + " bits to " +
                        std::to_string(to_width));
    }
    Word out = v.value();
    if (v.msb()) {
        out |= width_mask(to_width) & ~width_mask(v.width());
    }
    return BitVec(out, to_width);
}

BitVec zero_extend(const BitVec& v, unsigned to_width) {
    check_width(to_width);
    if (to_width < v.width()) {
        throw BitsError("zero_extend cannot narrow " + std::to_string(v.width()) + " bits to " +
                        std::to_string(to_width));
    }
    return BitVec(v.value(), to_width);
}

BitVec extract_field(Word w, unsigned hi, unsigned lo) {
    if (hi > 31 || lo > hi) {
        throw BitsError("field bounds must satisfy 31 >= hi >= lo, got hi=" + std::to_string(hi) +
                        " lo=" + std::to_string(lo));
    }
    const unsigned width = hi - lo + 1;
    return BitVec((w >> lo) & width_mask(width), width);
}

}  // namespace rv32sc::bits
