#pragma once

#include <cstdint>
#include <cstddef>

#include "gcd/vocabulary.hpp"

namespace gcd {

/// Deterministic stand-in for a subword vocabulary over configuration /
/// JSON text: every printable ASCII byte plus tab, newline and carriage
/// return, then multi-byte pieces (keywords, identifier and number
/// fragments, string pieces, punctuation runs spanning several lexemes)
/// until `size` entries, with EOS as the last id.
Vocabulary synthetic_vocabulary(std::size_t size, std::uint64_t seed);

}  // namespace gcd
