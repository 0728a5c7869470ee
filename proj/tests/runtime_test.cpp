#include <gtest/gtest.h>

#include <random>

#include "gcd/oracle/random_instance.hpp"
#include "gcd/runtime.hpp"
#include "testkit.hpp"

using namespace gcd;

namespace {

const CompiledArtifact& bc() { return testkit::bc_artifact(); }
TokenId tok(std::string_view s) { return testkit::token_id(bc().vocab, s); }

}  // namespace

TEST(InitState, BcGrammar) {
  DecoderState s = init_state(bc());
  EXPECT_EQ(s.lexer_state, 0);
  EXPECT_EQ(s.parser_state, bc().pda.start_state);
  EXPECT_TRUE(s.stack.empty());
  EXPECT_FALSE(s.finished);
  EXPECT_EQ(init_state(bc()), s);
  EXPECT_EQ(replay(bc(), {}), s);
}

TEST(ComputeMask, HandDerived) {
  const auto& v = bc().vocab;
  EXPECT_EQ(compute_mask(bc(), init_state(bc())), testkit::mask_of(v, {"a", "ab", "aba"}));
  EXPECT_EQ(compute_mask(bc(), replay(bc(), {tok("ab")})),
            testkit::mask_of(v, {"a", "b", "ac"}));
  EXPECT_EQ(compute_mask(bc(), replay(bc(), {tok("ab"), tok("ac")})),
            testkit::mask_of(v, {"a", "c", "ab", "aba", "<EOS>"}));
}

TEST(ComputeMask, FinishedIsEmpty) {
  DecoderState s = replay(bc(), {tok("ab"), tok("ac"), tok("<EOS>")});
  EXPECT_FALSE(compute_mask(bc(), s).any());
}

TEST(Advance, BcGrammarSteps) {
  DecoderState s = advance(bc(), init_state(bc()), tok("ab"));
  EXPECT_EQ(s.lexer_state, 2);
  EXPECT_EQ(s.parser_state, bc().pda.start_state);
  EXPECT_TRUE(s.stack.empty());

  s = advance(bc(), s, tok("ac"));
  EXPECT_EQ(s.lexer_state, 3);
  EXPECT_EQ(s.parser_state, 1);  // after shifting B
  EXPECT_EQ(s.stack, (std::vector<StateId>{0}));

  s = advance(bc(), s, tok("<EOS>"));
  EXPECT_TRUE(s.finished);
  EXPECT_TRUE(is_complete(s));
}

TEST(Advance, MaskedTokenThrows) {
  DecoderState s = replay(bc(), {tok("ab")});
  EXPECT_THROW(advance(bc(), s, tok("ab")), MaskedTokenError);
  EXPECT_THROW(advance(bc(), init_state(bc()), tok("<EOS>")), MaskedTokenError);
}

TEST(Advance, RejectsEverythingWhenFinished) {
  DecoderState s = replay(bc(), {tok("ab"), tok("ac"), tok("<EOS>")});
  for (TokenId t = 0; t < static_cast<TokenId>(bc().vocab.size()); ++t)
    EXPECT_THROW(advance(bc(), s, t), MaskedTokenError);
}

TEST(IsComplete, Initial) { EXPECT_FALSE(is_complete(init_state(bc()))); }

TEST(TokenAllowed, MatchesMaskBits) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto inst = oracle::random_instance(seed);
    auto a = compile_artifact(inst.grammar, inst.vocab);
    std::vector<TokenMask> masks;
    auto walk = random_walk(a, 40, seed, nullptr, &masks);
    DecoderState s = init_state(a);
    for (std::size_t i = 0; i < walk.size(); ++i) {
      for (TokenId t = 0; t < static_cast<TokenId>(a.vocab.size()); ++t)
        ASSERT_EQ(token_allowed(a, s, t), masks[i].test(t)) << "seed " << seed << " step " << i;
      s = advance(a, s, walk[i]);
      if (s.finished || !compute_mask(a, s).any()) s = init_state(a);
    }
  }
}

TEST(MaskCache, Transparent) {
  Grammar g = testkit::config_grammar();
  auto inst = oracle::random_instance(3);
  for (const CompiledArtifact* a : {&bc()}) {
    MaskCache cache(64);
    std::vector<TokenMask> masks;
    auto walk = random_walk(*a, 200, 9, nullptr, &masks);
    DecoderState s = init_state(*a);
    for (std::size_t i = 0; i < walk.size(); ++i) {
      EXPECT_EQ(compute_mask(*a, s, &cache), masks[i]);
      EXPECT_EQ(compute_mask(*a, s, &cache), masks[i]);
      s = advance(*a, s, walk[i]);
      if (s.finished) s = init_state(*a);
    }
    EXPECT_GT(cache.hits(), 0u);
    EXPECT_LE(cache.size(), 64u);
  }
}

TEST(MaskCache, SuffixKeyed) {
  MaskCache cache;
  cache.store(3, 7, {0, 1, 5}, 1, true);
  EXPECT_EQ(cache.lookup(3, 7, {9, 9, 5}), true);
  EXPECT_EQ(cache.lookup(3, 7, {0, 1, 4}), std::nullopt);
  EXPECT_EQ(cache.lookup(3, 8, {0, 1, 5}), std::nullopt);
  cache.store(3, 7, {0, 1, 4}, 0, false);
  EXPECT_EQ(cache.lookup(3, 7, {}), false);
}

TEST(Replay, Deterministic) {
  auto inst = oracle::random_instance(11);
  auto a = compile_artifact(inst.grammar, inst.vocab);
  auto walk = random_walk(a, 30, 4);
  DecoderState s = init_state(a);
  std::vector<TokenId> history;
  for (TokenId t : walk) {
    s = advance(a, s, t);
    history.push_back(t);
    if (s.finished || !compute_mask(a, s).any()) {
      s = init_state(a);
      history.clear();
      continue;
    }
    EXPECT_EQ(replay(a, history), s);
    EXPECT_EQ(advance(a, replay(a, {history.begin(), history.end() - 1}), t), s);
  }
}

TEST(CompileArtifact, ConflictingGrammar) {
  Grammar g = parse_grammar_spec("A : /a/ ; s : s s | A ;");
  Vocabulary v;
  v.tokens = {"a", ""};
  v.eos_id = 1;
  EXPECT_THROW(compile_artifact(g, v), ConflictError);
}

TEST(CompileArtifact, CoverageWarning) {
  Vocabulary v;
  v.tokens = {"a", "ab", "ac", ""};
  v.eos_id = 3;
  CompileReport r;
  compile_artifact(testkit::bc_grammar(), v, &r);
  ASSERT_FALSE(r.warnings.empty());
  EXPECT_NE(r.warnings[0].find("coverage"), std::string::npos) << r.warnings[0];
}

TEST(CompileArtifact, Report) {
  CompileReport r;
  compile_artifact(testkit::bc_grammar(), testkit::bc_vocab(), &r);
  EXPECT_EQ(r.lexer_states, 4u);
  EXPECT_EQ(r.reachable_lexer_states, 4u);
  EXPECT_EQ(r.token_transitions, 19u);
  EXPECT_EQ(r.realizable, 13u);
  EXPECT_EQ(r.lr_states, 5u);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(IgnoredTerminals, MaskAllowsWhitespaceAnywhere) {
  Grammar g = parse_grammar_spec("A : /a/ ; WS : / +/ ; %ignore WS ; s : A | A s ;");
  Vocabulary v;
  v.tokens = {"a", " ", "a a", ""};
  v.eos_id = 3;
  auto a = compile_artifact(g, v);
  EXPECT_EQ(compute_mask(a, init_state(a)), TokenMask::from_ids(4, std::vector<TokenId>{0, 1, 2}));
  DecoderState s = replay(a, {1, 0, 1, 2, 1});
  EXPECT_EQ(compute_mask(a, s), TokenMask::from_ids(4, std::vector<TokenId>{0, 1, 2, 3}));
  EXPECT_TRUE(advance(a, s, 3).finished);
}
