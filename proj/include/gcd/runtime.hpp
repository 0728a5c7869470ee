#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gcd/fsa.hpp"
#include "gcd/grammar.hpp"
#include "gcd/hash.hpp"
#include "gcd/lalr.hpp"
#include "gcd/parser_tables.hpp"
#include "gcd/spanner.hpp"
#include "gcd/token_fst.hpp"
#include "gcd/token_mask.hpp"
#include "gcd/vocabulary.hpp"

namespace gcd {

/// Everything the decoder needs, built once per (grammar, vocabulary).
struct CompiledArtifact {
  Grammar grammar;
  Vocabulary vocab;
  Digest grammar_hash{};
  Digest vocab_hash{};
  TokenLexingFst tlf;
  SpannerTables spanner;
  Pda pda;
  ParserTables tables;
};

struct CompileReport {
  std::vector<std::string> warnings;
  std::int64_t offline_us = 0;
  std::size_t lexer_states = 0;
  std::size_t reachable_lexer_states = 0;
  std::size_t token_transitions = 0;
  std::size_t realizable = 0;
  std::size_t lr_states = 0;
  std::size_t a_entries = 0;  // set bits over all A rows
  std::size_t d_entries = 0;  // sequence ids over all D rows
};

Digest grammar_digest(const Grammar& g);
Digest vocab_digest(const Vocabulary& v);

/// Throws ConflictError, GrammarError or VocabularyError.
CompiledArtifact compile_artifact(const Grammar& g, const Vocabulary& v,
                                  CompileReport* report = nullptr);

struct DecoderState {
  StateId lexer_state = 0;
  StateId parser_state = 0;
  std::vector<StateId> stack;  // below parser_state, bottom first
  bool finished = false;

  bool operator==(const DecoderState&) const = default;
};

DecoderState init_state(const CompiledArtifact& a);

/// Memo for stack-dependent checks, keyed by (parser state, sequence) and
/// the part of the stack the check actually read. Results are exact, so
/// one cache can serve any number of steps of one artifact.
class MaskCache {
 public:
  explicit MaskCache(std::size_t capacity = 1 << 16) : capacity_(capacity) {}
  std::size_t size() const { return size_; }
  std::size_t hits() const { return hits_; }

  std::optional<bool> lookup(StateId qp, SeqId seq, const std::vector<StateId>& stack);
  void store(StateId qp, SeqId seq, const std::vector<StateId>& stack, std::size_t inspected,
             bool accepted);

 private:
  struct Entry {
    std::vector<StateId> suffix;  // top-most stack entries, bottom first
    bool accepted;
  };
  std::size_t capacity_;
  std::size_t size_ = 0;
  std::size_t hits_ = 0;
  std::map<std::pair<StateId, SeqId>, std::vector<Entry>> entries_;
};

/// Allowed tokens for `s`; all-zero once finished.
TokenMask compute_mask(const CompiledArtifact& a, const DecoderState& s,
                       MaskCache* cache = nullptr);

/// Single-bit version of compute_mask.
bool token_allowed(const CompiledArtifact& a, const DecoderState& s, TokenId t);

/// Throws MaskedTokenError when `t` is not allowed in `s`.
DecoderState advance(const CompiledArtifact& a, const DecoderState& s, TokenId t);

inline bool is_complete(const DecoderState& s) { return s.finished; }

/// Advances through `tokens` from init_state.
DecoderState replay(const CompiledArtifact& a, const std::vector<TokenId>& tokens);

}  // namespace gcd
