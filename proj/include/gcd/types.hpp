#pragma once

#include <cstdint>
#include <vector>

namespace gcd {

using TerminalId = std::int32_t;
using TokenId = std::int32_t;
using StateId = std::int32_t;
using SeqId = std::int32_t;

/// A sequence over terminals plus the end marker `$`.
using TerminalSeq = std::vector<TerminalId>;

inline constexpr StateId kNoState = -1;

/// Virtual input symbol that follows the 256 byte values.
inline constexpr int kEos = 256;

}  // namespace gcd
