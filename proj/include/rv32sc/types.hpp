#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

namespace rv32sc {

using Word = std::uint32_t;
using SWord = std::int32_t;

inline constexpr unsigned kNumRegisters = 32;

// Architectural trap causes. ECALL and EBREAK halt cleanly; the rest are faults.
enum class TrapKind : std::uint8_t {
    Ecall,
    Ebreak,
    IllegalInstruction,
    MisalignedAccess,
    MisalignedTarget,
    AccessOutOfRange,
    FetchOutOfRange,
};

constexpr bool is_clean_halt(TrapKind k) { return k == TrapKind::Ecall || k == TrapKind::Ebreak; }

std::string_view to_string(TrapKind k);

// Raised by datapath components; the step engines capture it into the machine status.
class TrapError : public std::runtime_error {
public:
    explicit TrapError(TrapKind kind);
    TrapKind kind() const noexcept { return kind_; }

private:
    TrapKind kind_;
};

}  // namespace rv32sc
