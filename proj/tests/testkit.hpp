#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "gcd/decode.hpp"
#include "gcd/lalr.hpp"
#include "gcd/runtime.hpp"

namespace gcd::testkit {

std::string read_file(const std::string& path);
std::string data_path(const std::string& rel);

Grammar bc_grammar();
Vocabulary bc_vocab();
/// Compiled once per process.
const CompiledArtifact& bc_artifact();
Grammar config_grammar();

/// Id of the token with these bytes; "<EOS>" names the EOS entry.
TokenId token_id(const Vocabulary& v, std::string_view bytes);
std::vector<TokenId> token_ids(const Vocabulary& v, std::initializer_list<std::string_view> toks);
TokenMask mask_of(const Vocabulary& v, std::initializer_list<std::string_view> toks);

/// Outcome of a property sweep: counts checked cases and keeps the first
/// few failures.
struct Check {
  bool ok = true;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string detail;
  void fail(const std::string& what);
  void merge(const Check& other);
};

std::vector<std::string> all_strings(std::string_view alphabet, int max_len);
std::vector<std::string> random_strings(std::uint64_t seed, std::string_view alphabet,
                                        std::size_t count, int max_len);
/// All token sequences up to `max_len`, where EOS may appear only last.
std::vector<std::vector<TokenId>> all_token_sequences(const Vocabulary& v, int max_len);

/// Character-level lexing transducer replay agrees with the reference lexer
/// (emissions, and state = automaton state of the residual).
Check lexing_fst_matches_reference(const Grammar& g, const std::vector<std::string>& inputs);
/// Token-level transducer agrees with the reference lexer on the
/// detokenization.
Check token_fst_matches_reference(const Grammar& g, const Vocabulary& v,
                                  const std::vector<std::vector<TokenId>>& seqs);

/// Accepted (state, stack, alpha) triples stay accepted under random
/// padding below the stack.
Check stack_invariance(const Pda& p, std::uint64_t seed, std::size_t samples, std::size_t paddings);
/// Sequences the stripped automaton rejects are never accepted by the PDA.
Check overapproximation(const Pda& p, std::uint64_t seed, std::size_t samples,
                        std::size_t stacks_per_sample);
/// A, R, D are disjoint and cover the realizable set; D rows are
/// consistent with t_inv and the stripped automaton.
Check partition_law(const CompiledArtifact& a);

/// Random phase of `random_steps` steps, then the shortest completion.
class FinishingScorer final : public Scorer {
 public:
  FinishingScorer(const CompiledArtifact& a, std::uint64_t seed, std::size_t random_steps);
  std::vector<double> score(const std::vector<TokenId>& history) override;

 private:
  const CompiledArtifact& a_;
  UniformScorer random_;
  std::size_t random_steps_;
};

/// Reference lexer + Earley: is `text` followed by EOS a sentence?
bool in_lex_language(const Grammar& g, std::string_view text);

Check end_to_end(const CompiledArtifact& a, std::uint64_t seed, std::size_t runs,
                 std::size_t max_len);

/// Masks of a seeded random walk before and after a serialize round trip.
Check roundtrip_walk(const CompiledArtifact& a, std::size_t steps, std::uint64_t seed);

}  // namespace gcd::testkit
