#pragma once

// Memory images: Logisim "v2.0 raw" text and little-endian raw binary.
//
// v2.0 raw as written here: the header line `v2.0 raw`, then lowercase hex
// words without leading zeros, eight tokens per line separated by single
// spaces, each line newline-terminated. A run of four or more identical
// words is written as one `N*value` token (N decimal). The reader also
// accepts arbitrary whitespace and `#` comments.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rv32sc/types.hpp"

namespace rv32sc::image {

struct MemImage {
    Word origin = 0;
    std::vector<Word> words;

    friend bool operator==(const MemImage&, const MemImage&) = default;
};

class ImageError : public std::runtime_error {
public:
    enum class Kind { BadHeader, BadToken, Overflow, Truncated };

    ImageError(Kind kind, std::size_t line, const std::string& what);
    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    Kind kind_;
    std::size_t line_;
};

inline constexpr unsigned kWordsPerLine = 8;
inline constexpr unsigned kRunThreshold = 4;
// Upper bound on words a single image may expand to.
inline constexpr std::size_t kMaxImageWords = std::size_t{1} << 24;

std::string write_v2raw(const MemImage& img);
MemImage read_v2raw(std::string_view text);

std::vector<std::uint8_t> write_bin(const MemImage& img);
MemImage read_bin(std::span<const std::uint8_t> bytes);

bool looks_like_v2raw(std::string_view text);

}  // namespace rv32sc::image
