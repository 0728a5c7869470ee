#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace gcd {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::string_view data);
std::string to_hex(const Digest& d);

std::string base64_encode(std::string_view bytes);
/// Throws VocabularyError on malformed input.
std::string base64_decode(std::string_view text);

}  // namespace gcd
