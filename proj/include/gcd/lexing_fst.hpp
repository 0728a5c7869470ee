#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcd/fsa.hpp"
#include "gcd/types.hpp"

namespace gcd {

/// Character-level lexing transducer built from a lexing automaton.
///
/// Byte edges emit nothing inside a lexeme and exactly one terminal at a
/// lexeme boundary. EOS edges return to the initial state emitting `T $`
/// (or just `$` from the initial state).
struct LexingFst {
  struct Edge {
    StateId target = kNoState;
    TerminalId emit = -1;  // -1 means epsilon
  };
  using Row = std::array<Edge, 256>;

  StateId initial = 0;
  TerminalId end_marker = 0;
  std::vector<Row> edges;
  std::vector<std::optional<TerminalSeq>> eos;  // target is always `initial`
  std::vector<TerminalId> label;                // copied from the automaton

  std::size_t num_states() const { return edges.size(); }
  const Edge& edge(StateId q, std::uint8_t c) const {
    return edges[static_cast<std::size_t>(q)][c];
  }
};

LexingFst build_lexing_fst(const Fsa& a);

/// Replays bytes (and optionally a trailing EOS) from `from`; returns false
/// when some symbol has no edge.
bool replay_lexing_fst(const LexingFst& fst, StateId from, std::string_view bytes, bool eos,
                       StateId& to, TerminalSeq& emitted);

/// `src -c:OUT-> dst`, `eps` for empty output and `EOS` for the end symbol.
std::string dump_lexing_fst(const LexingFst& fst, const Grammar& g);

/// Answers the two questions the reference lexer asks about a residual.
class LexemeOracle {
 public:
  virtual ~LexemeOracle() = default;
  /// True iff `s` is a prefix of some string in some terminal language.
  virtual bool is_live_prefix(std::string_view s) const = 0;
  /// Highest-priority terminal whose language contains `s`, or -1.
  virtual TerminalId accepted_terminal(std::string_view s) const = 0;
  virtual TerminalId end_marker() const = 0;
};

class FsaLexemes final : public LexemeOracle {
 public:
  explicit FsaLexemes(const Fsa& a) : fsa_(a) {}
  bool is_live_prefix(std::string_view s) const override { return fsa_.run(s) != kNoState; }
  TerminalId accepted_terminal(std::string_view s) const override {
    StateId q = fsa_.run(s);
    return q == kNoState ? -1 : fsa_.label[static_cast<std::size_t>(q)];
  }
  TerminalId end_marker() const override { return fsa_.num_terminals; }

 private:
  const Fsa& fsa_;
};

/// Lex(w) = (emitted terminals, unlexed residual).
struct LexResult {
  TerminalSeq terminals;
  std::string residual;
  bool operator==(const LexResult&) const = default;
};

/// One step of the 1-lookahead maximal-munch lexer; `symbol` is a byte
/// value or kEos. Returns false for the undefined case, leaving `state`
/// unspecified.
bool reference_lex_step(LexResult& state, int symbol, const LexemeOracle& lexemes);

/// Lexes `input` (then EOS when `eos`) from the empty state.
std::optional<LexResult> reference_lex(std::string_view input, bool eos,
                                       const LexemeOracle& lexemes);
std::optional<LexResult> reference_lex(std::string_view input, bool eos, const Fsa& a);

}  // namespace gcd
