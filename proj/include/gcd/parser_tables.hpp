#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gcd/lalr.hpp"
#include "gcd/spanner.hpp"
#include "gcd/token_mask.hpp"
#include "gcd/token_fst.hpp"

namespace gcd {

/// Per parser state, each realizable sequence is always accepted,
/// always rejected, or depends on the stack below.
enum class SeqClass : std::uint8_t { Accepted, Rejected, Dependent };

struct ParserTables {
  std::size_t num_lexer_states = 0;
  std::size_t num_lr_states = 0;
  std::size_t vocab_size = 0;
  std::vector<TokenMask> a_table;             // [qA * num_lr_states + qP]
  std::vector<std::vector<SeqId>> d_table;    // same indexing, sorted
  std::vector<std::vector<SeqClass>> classes; // [qP][seq]

  std::size_t index(StateId qa, StateId qp) const {
    return static_cast<std::size_t>(qa) * num_lr_states + static_cast<std::size_t>(qp);
  }
  const TokenMask& always(StateId qa, StateId qp) const { return a_table[index(qa, qp)]; }
  const std::vector<SeqId>& dependent(StateId qa, StateId qp) const { return d_table[index(qa, qp)]; }

  bool operator==(const ParserTables&) const = default;
};

/// Lexer states not reachable in `tlf` get empty rows.
ParserTables preprocess_parser(const Pda& p, const StrippedFsa& f, const SpannerTables& s,
                               const TokenLexingFst& tlf);

/// One line per (parser state, sequence): `state\tclass\tsequence` with
/// class A, R or D.
std::string dump_partition(const ParserTables& t, const SpannerTables& s, const Grammar& g);

}  // namespace gcd
