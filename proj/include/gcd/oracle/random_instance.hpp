#pragma once

#include <cstdint>
#include <string>

#include "gcd/grammar.hpp"
#include "gcd/vocabulary.hpp"

namespace gcd::oracle {

struct InstanceSize {
  int max_terminals = 4;
  int max_nonterminals = 5;
  int max_rules = 10;
  std::string alphabet = "abcd";
  int max_token_len = 3;
};

struct Instance {
  std::string grammar_text;
  Grammar grammar;
  Vocabulary vocab;
  int attempts = 0;  // samples drawn before one passed the filters
};

/// Every string over the alphabet up to max_token_len, shortest first, then
/// EOS as the last id.
Vocabulary alphabet_vocabulary(const InstanceSize& size);

/// Deterministic per seed. Samples until the grammar validates, is
/// LALR(1), and its lexer can realize every terminal sequence the grammar
/// needs (see `lexically_realizable`).
Instance random_instance(std::uint64_t seed, const InstanceSize& size = {});

/// From every lexer state reachable under the vocabulary and every
/// terminal T producible there, each sequence T β $ with β over the
/// terminals used in rules is the output of some byte string. Without this
/// a grammar-valid terminal sequence may have no lexing, and the mask is
/// only an overapproximation.
bool lexically_realizable(const Grammar& g, const Vocabulary& v);

}  // namespace gcd::oracle
