#include "rv32sc/display.hpp"

#include <array>
#include <cassert>

namespace rv32sc::display {

std::string BcdDigits::to_string() const {
    std::string out;
    out.reserve(digits.size());
    for (auto d : digits) out.push_back(static_cast<char>('0' + d));
    return out;
}

BcdDigits double_dabble(const bits::BitVec& v) {
    // 32 input bits need at most 10 decimal digits: 40 bits of scratch.
    constexpr unsigned kNibbles = 10;
    std::uint64_t bcd = 0;

    for (unsigned i = v.width(); i-- > 0;) {
        for (unsigned n = 0; n < kNibbles; ++n) {
            const unsigned shift = 4 * n;
            if (((bcd >> shift) & 0xF) >= 5) bcd += std::uint64_t{3} << shift;
        }
        bcd = (bcd << 1) | (v.bit(i) ? 1u : 0u);
#ifndef NDEBUG
        for (unsigned n = 0; n < kNibbles; ++n) assert(((bcd >> (4 * n)) & 0xF) <= 9);
#endif
    }

    BcdDigits out;
    out.source_width = v.width();
    bool leading = true;
    for (unsigned n = kNibbles; n-- > 0;) {
        const auto d = static_cast<std::uint8_t>((bcd >> (4 * n)) & 0xF);
        if (leading && d == 0 && n != 0) continue;
        leading = false;
        out.digits.push_back(d);
    }
    return out;
}

SevenSegPattern seven_seg_encode(unsigned d) {
    // Bit i is segment a + i.
    static constexpr std::array<std::uint8_t, 10> kPatterns{
        0b0111111,  // 0: a b c d e f
        0b0000110,  // 1: b c
        0b1011011,  // 2: a b d e g
        0b1001111,  // 3: a b c d g
        0b1100110,  // 4: b c f g
        0b1101101,  // 5: a c d f g
        0b1111101,  // 6: a c d e f g
        0b0000111,  // 7: a b c
        0b1111111,  // 8
        0b1101111,  // 9: a b c d f g
    };
    if (d > 9) throw DisplayError("seven-segment digit must be 0..9, got " + std::to_string(d));
    return SevenSegPattern{std::bitset<7>(kPatterns[d])};
}

std::string render_output(Word latch, unsigned digit_count) {
    if (digit_count == 0) digit_count = 1;
    const auto bcd = double_dabble(bits::BitVec(latch, 32));

    // Keep the low digit_count digits, left-padding with zeros.
    std::vector<std::uint8_t> shown(digit_count, 0);
    const std::size_t have = bcd.digits.size();
    for (std::size_t i = 0; i < digit_count && i < have; ++i) {
        shown[digit_count - 1 - i] = bcd.digits[have - 1 - i];
    }

    std::array<std::string, 3> rows;
    for (std::size_t i = 0; i < shown.size(); ++i) {
        const auto p = seven_seg_encode(shown[i]);
        if (i != 0) {
            for (auto& row : rows) row += ' ';
        }
        rows[0] += {' ', p.lit(kA) ? '_' : ' ', ' '};
        rows[1] += {p.lit(kF) ? '|' : ' ', p.lit(kG) ? '_' : ' ', p.lit(kB) ? '|' : ' '};
        rows[2] += {p.lit(kE) ? '|' : ' ', p.lit(kD) ? '_' : ' ', p.lit(kC) ? '|' : ' '};
    }
    return rows[0] + '\n' + rows[1] + '\n' + rows[2] + '\n';
}

}  // namespace rv32sc::display
