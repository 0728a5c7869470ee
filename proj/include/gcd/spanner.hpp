#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gcd/grammar.hpp"
#include "gcd/lexing_fst.hpp"
#include "gcd/sequence_pool.hpp"
#include "gcd/token_fst.hpp"
#include "gcd/token_mask.hpp"

namespace gcd {

/// Prod(q): terminals that can be emitted first on some path from q.
using ProducibleMap = std::vector<std::vector<TerminalId>>;

ProducibleMap producible_terminals(const LexingFst& lex);

/// Realizable terminal sequences and the inverse token spanner table.
///
/// Sequences are stored in the form the parser sees them: ignored terminals
/// removed, with `$` only in final position.
struct SpannerTables {
  struct Entry {
    SeqId seq;
    std::vector<TokenId> tokens;  // sorted
    bool operator==(const Entry&) const = default;
  };

  SequencePool sequences;                  // the realizable set
  ProducibleMap prod;
  std::vector<std::vector<Entry>> t_inv;   // per lexer state, sorted by seq id

  std::size_t num_realizable() const { return sequences.size(); }
  /// Entry for (q, seq) or nullptr.
  const Entry* find(StateId q, SeqId seq) const;

  bool operator==(const SpannerTables&) const = default;
};

/// `ignored[t]` marks terminals the parser never sees.
SpannerTables build_spanner_tables(const TokenLexingFst& tlf, const ProducibleMap& prod,
                                   const std::vector<bool>& ignored);

/// T_inv(q, seq) as a mask; empty when absent.
TokenMask lookup_tokens(const SpannerTables& s, StateId q, SeqId seq, std::size_t vocab_size);

/// Forward table: for each reachable (state, token) the raw sequences
/// T1..Tk T (ignored terminals kept), or T1..Tk $ for EOS.
std::vector<TerminalSeq> forward_cell(const TokenLexingFst& tlf, const ProducibleMap& prod,
                                      StateId q, TokenId t);

/// CSV `state,token,sequences` with sequences separated by `;` and
/// terminals inside a sequence by spaces.
std::string dump_spanner_csv(const TokenLexingFst& tlf, const ProducibleMap& prod,
                             const Grammar& g, const Vocabulary& v);

}  // namespace gcd
