#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gcd/lexing_fst.hpp"
#include "gcd/sequence_pool.hpp"
#include "gcd/types.hpp"
#include "gcd/vocabulary.hpp"

namespace gcd {

/// Detokenizing transducer: a trie over token prefixes. State 0 is q_eps;
/// every other state is a proper prefix of some token.
struct DetokenizingFst {
  struct TokenEdge {
    TokenId token;
    std::uint8_t last_byte;  // emitted while consuming the token, back to q_eps
  };
  struct State {
    std::string prefix;
    std::map<std::uint8_t, StateId> children;  // eps-input edges emitting one byte
    std::vector<TokenEdge> finals;
  };
  std::vector<State> states;
};

DetokenizingFst build_detokenizing_fst(const Vocabulary& v);

/// `q_<prefix> -eps:c-> q_<prefix>` and `q_<prefix> -<token>:c-> q_eps`.
std::string dump_detokenizing_fst(const DetokenizingFst& d, const Vocabulary& v);

/// Determinized token-level lexing transducer. Lexer state ids are those of
/// the character-level transducer; states not reachable from the initial
/// state under token steps carry no entries.
struct TokenLexingFst {
  struct Step {
    TokenId token;
    StateId target;
    SeqId emission;  // id in `emissions`
    bool operator==(const Step&) const = default;
  };

  StateId initial = 0;
  TerminalId end_marker = 0;
  TokenId eos_id = 0;
  std::size_t vocab_size = 0;
  std::vector<bool> reachable;
  std::vector<std::vector<Step>> steps;  // per state, sorted by token
  SequencePool emissions;

  std::size_t num_states() const { return steps.size(); }
  std::optional<Step> step(StateId q, TokenId t) const;
  std::size_t num_transitions() const;

  bool operator==(const TokenLexingFst&) const = default;
};

/// Composes the detokenizer into the lexing transducer by walking the trie
/// from every lexer state. Work is sharded over up to `threads` workers
/// (0 = `GCD_THREADS` or the hardware concurrency).
TokenLexingFst compose_and_determinize(const LexingFst& lex, const DetokenizingFst& detok,
                                       const Vocabulary& v, unsigned threads = 0);

/// Worker count from `GCD_THREADS`, defaulting to the hardware concurrency.
unsigned build_threads();

}  // namespace gcd
