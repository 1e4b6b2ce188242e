#pragma once

// Output stage: binary to BCD by double dabble, then seven-segment encoding.

#include <bitset>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rv32sc/bits.hpp"
#include "rv32sc/types.hpp"

namespace rv32sc::display {

class DisplayError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct BcdDigits {
    std::vector<std::uint8_t> digits;  // most significant first
    unsigned source_width = 0;

    std::string to_string() const;
    friend bool operator==(const BcdDigits&, const BcdDigits&) = default;
};

// Shift-and-add-3: one iteration per input bit; before each shift every BCD
// nibble holding 5 or more is corrected by adding 3.
BcdDigits double_dabble(const bits::BitVec& v);

enum Segment : unsigned { kA = 0, kB, kC, kD, kE, kF, kG };

//    a
//   ---
// f|   |b
//   -g-
// e|   |c
//   ---
//    d
struct SevenSegPattern {
    std::bitset<7> segments;

    bool lit(Segment s) const { return segments.test(s); }
    friend bool operator==(const SevenSegPattern&, const SevenSegPattern&) = default;
};

// Throws DisplayError for d > 9.
SevenSegPattern seven_seg_encode(unsigned d);

inline constexpr unsigned kDefaultDigitCount = 4;

// Three text rows per digit, three columns per digit, one space between
// digits, every row newline-terminated. Shows the low digit_count decimal
// digits of latch, zero-padded on the left.
//
// render_output(1234567890, 10):
//
//      _   _       _   _   _   _   _   _
//   |  _|  _| |_| |_  |_    | |_| |_| | |
//   | |_   _|   |  _| |_|   | |_|  _| |_|
std::string render_output(Word latch, unsigned digit_count = kDefaultDigitCount);

}  // namespace rv32sc::display
