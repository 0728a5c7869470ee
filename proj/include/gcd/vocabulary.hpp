#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "gcd/fsa.hpp"
#include "gcd/types.hpp"

namespace gcd {

/// Subword vocabulary: token id -> byte string. The EOS entry is a reserved
/// sentinel with empty content; every other token is non-empty.
struct Vocabulary {
  std::vector<std::string> tokens;
  TokenId eos_id = 0;

  std::size_t size() const { return tokens.size(); }
  const std::string& bytes(TokenId t) const { return tokens.at(static_cast<std::size_t>(t)); }
  /// Token text for dumps; EOS renders as `<EOS>`.
  std::string display(TokenId t) const;
  std::string detokenize(const std::vector<TokenId>& ids) const;

  bool operator==(const Vocabulary&) const = default;
};

/// Parses `{"version":1, "tokens":[base64,...], "eos_id":int}`.
/// Duplicate tokens are accepted and reported through `warnings`.
Vocabulary load_vocabulary(std::string_view json, std::vector<std::string>* warnings = nullptr);

std::string save_vocabulary(const Vocabulary& v);

/// Bytes that the lexer can consume somewhere but that no single-byte token
/// provides.
struct CoverageReport {
  std::vector<std::uint8_t> missing_bytes;
  bool complete() const { return missing_bytes.empty(); }
};

CoverageReport check_coverage(const Vocabulary& v, const Fsa& lexer);

}  // namespace gcd
