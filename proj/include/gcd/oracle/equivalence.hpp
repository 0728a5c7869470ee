#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gcd/oracle/mask_oracle.hpp"
#include "gcd/runtime.hpp"

namespace gcd::oracle {

struct EquivalenceRow {
  std::vector<TokenId> prefix;
  TokenMask engine;
  TokenMask oracle;
  TokenMask undecided;
  bool differs() const { return !(engine == oracle) && !undecided.any(); }
};

struct EquivalenceReport {
  std::size_t prefixes = 0;    // distinct (oracle, engine) classes visited
  std::size_t diffs = 0;
  std::size_t undecided = 0;   // classes with bits the horizon could not settle
  std::vector<EquivalenceRow> rows;

  bool equivalent() const { return diffs == 0; }
  bool decided() const { return undecided == 0; }
};

/// Compares compute_mask with the oracle at every prefix reachable under
/// the masks, up to cfg.max_prefix_tokens tokens. Prefixes that reach the
/// same oracle state and the same decoder state are visited once, which
/// loses nothing: both masks and all successors are functions of that
/// pair. `rows` keeps every visited prefix when `keep_all`, otherwise only
/// mismatches.
EquivalenceReport check_equivalence(const CompiledArtifact& a, const OracleConfig& cfg,
                                    bool keep_all = false);

/// `prefix<TAB>engine<TAB>oracle<TAB>diff` with space-separated ids.
std::string format_equivalence(const EquivalenceReport& r, const Vocabulary& v);

}  // namespace gcd::oracle
