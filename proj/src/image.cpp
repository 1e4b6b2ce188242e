#include "rv32sc/image.hpp"

#include <charconv>

#include <fmt/format.h>

namespace rv32sc::image {

namespace {

constexpr std::string_view kHeader = "v2.0 raw";

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::uint64_t parse_hex(std::string_view tok, std::size_t line) {
    if (tok.empty()) throw ImageError(ImageError::Kind::BadToken, line, "empty hex value");
    std::uint64_t v = 0;
    for (const char c : tok) {
        unsigned digit = 0;
        if (c >= '0' && c <= '9') {
            digit = static_cast<unsigned>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            digit = static_cast<unsigned>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            digit = static_cast<unsigned>(c - 'A' + 10);
        } else {
            throw ImageError(ImageError::Kind::BadToken, line, fmt::format("bad hex token '{}'", tok));
        }
        v = (v << 4) | digit;
        if (v > 0xFFFFFFFFull) {
            throw ImageError(ImageError::Kind::Overflow, line, fmt::format("value '{}' exceeds 32 bits", tok));
        }
    }
    return v;
}

}  // namespace

ImageError::ImageError(Kind kind, std::size_t line, const std::string& what)
    : std::runtime_error(line ? fmt::format("line {}: {}", line, what) : what), kind_(kind), line_(line) {}

std::string write_v2raw(const MemImage& img) {
    std::string out(kHeader);
    out += '\n';
    unsigned on_line = 0;
    auto emit = [&](const std::string& tok) {
        if (on_line == kWordsPerLine) {
            out += '\n';
            on_line = 0;
        }
        if (on_line != 0) out += ' ';
        out += tok;
        ++on_line;
    };

    const auto& w = img.words;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t run = 1;
        while (i + run < w.size() && w[i + run] == w[i]) ++run;
        if (run >= kRunThreshold) {
            emit(fmt::format("{}*{:x}", run, w[i]));
            i += run;
        } else {
            emit(fmt::format("{:x}", w[i]));
            ++i;
        }
    }
    if (on_line != 0) out += '\n';
    return out;
}

bool looks_like_v2raw(std::string_view text) {
    const auto eol = text.find('\n');
    return trim(text.substr(0, eol)) == kHeader;
}

MemImage read_v2raw(std::string_view text) {
    std::size_t pos = text.find('\n');
    if (trim(text.substr(0, pos)) != kHeader) {
        throw ImageError(ImageError::Kind::BadHeader, 1, "expected header 'v2.0 raw'");
    }

    MemImage img;
    std::size_t line_no = 1;
    while (pos != std::string_view::npos) {
        const std::size_t start = pos + 1;
        pos = text.find('\n', start);
        ++line_no;
        std::string_view line = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i >= line.size()) break;
            std::size_t j = i;
            while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
            const std::string_view tok = line.substr(i, j - i);
            i = j;

            std::size_t count = 1;
            std::string_view value_tok = tok;
            if (const auto star = tok.find('*'); star != std::string_view::npos) {
                const std::string_view count_tok = tok.substr(0, star);
                value_tok = tok.substr(star + 1);
                const auto [p, ec] = std::from_chars(count_tok.data(), count_tok.data() + count_tok.size(), count);
                if (ec != std::errc{} || p != count_tok.data() + count_tok.size() || count == 0) {
                    throw ImageError(ImageError::Kind::BadToken, line_no, fmt::format("bad run length in '{}'", tok));
                }
            }
            const auto value = static_cast<Word>(parse_hex(value_tok, line_no));
            if (count > kMaxImageWords - img.words.size()) {
                throw ImageError(ImageError::Kind::Overflow, line_no, "image exceeds maximum size");
            }
            img.words.insert(img.words.end(), count, value);
        }
    }
    return img;
}

std::vector<std::uint8_t> write_bin(const MemImage& img) {
    std::vector<std::uint8_t> out;
    out.reserve(img.words.size() * 4);
    for (const Word w : img.words) {
        for (unsigned b = 0; b < 4; ++b) out.push_back(static_cast<std::uint8_t>(w >> (8 * b)));
    }
    return out;
}

MemImage read_bin(std::span<const std::uint8_t> bytes) {
    if (bytes.size() % 4 != 0) {
        throw ImageError(ImageError::Kind::Truncated, 0,
                         fmt::format("binary image length {} is not a multiple of 4", bytes.size()));
    }
    if (bytes.size() / 4 > kMaxImageWords) throw ImageError(ImageError::Kind::Overflow, 0, "image exceeds maximum size");
    MemImage img;
    img.words.resize(bytes.size() / 4);
    for (std::size_t i = 0; i < img.words.size(); ++i) {
        Word w = 0;
        for (unsigned b = 0; b < 4; ++b) w |= Word{bytes[4 * i + b]} << (8 * b);
        img.words[i] = w;
    }
    return img;
}

}  // namespace rv32sc::image
