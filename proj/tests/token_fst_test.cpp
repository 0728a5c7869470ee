#include <gtest/gtest.h>

#include "gcd/fsa.hpp"
#include "gcd/lexing_fst.hpp"
#include "gcd/oracle/random_instance.hpp"
#include "gcd/token_fst.hpp"
#include "testkit.hpp"

using namespace gcd;

namespace {

struct Bc {
  Grammar g = testkit::bc_grammar();
  Vocabulary v = testkit::bc_vocab();
  LexingFst lex = build_lexing_fst(build_lexing_automaton(g.terminals));
  DetokenizingFst detok = build_detokenizing_fst(v);
  TokenLexingFst tlf = compose_and_determinize(lex, detok, v, 1);
  TokenId a = 0, b = 1, c = 2, ab = 3, ac = 4, aba = 5, eos = 6;
};

}  // namespace

TEST(DetokenizingFst, TrieShape) {
  Bc f;
  // q_eps, q_a, q_ab
  ASSERT_EQ(f.detok.states.size(), 3u);
  EXPECT_EQ(f.detok.states[1].prefix, "a");
  EXPECT_EQ(f.detok.states[2].prefix, "ab");
  std::string d = dump_detokenizing_fst(f.detok, f.v);
  EXPECT_NE(d.find("q_a -ab:b-> q_eps"), std::string::npos) << d;
  EXPECT_NE(d.find("q_a -ac:c-> q_eps"), std::string::npos) << d;
  EXPECT_NE(d.find("q_ab -aba:a-> q_eps"), std::string::npos) << d;
  EXPECT_NE(d.find("q_eps -eps:a-> q_a"), std::string::npos) << d;
}

TEST(DetokenizingFst, SingleToken) {
  Vocabulary v;
  v.tokens = {"x", ""};
  v.eos_id = 1;
  auto d = build_detokenizing_fst(v);
  ASSERT_EQ(d.states.size(), 1u);
  ASSERT_EQ(d.states[0].finals.size(), 1u);
  EXPECT_EQ(d.states[0].finals[0].token, 0);
  EXPECT_EQ(d.states[0].finals[0].last_byte, 'x');
}

TEST(TokenLexingFst, KnownEdges) {
  Bc f;
  auto s = f.tlf.step(0, f.aba);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->target, 1);
  EXPECT_EQ(f.tlf.emissions.get(s->emission), (TerminalSeq{0}));

  s = f.tlf.step(2, f.ac);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->target, 3);
  EXPECT_EQ(f.tlf.emissions.get(s->emission), (TerminalSeq{0}));

  s = f.tlf.step(2, f.eos);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->target, 0);
  EXPECT_EQ(f.tlf.emissions.get(s->emission), (TerminalSeq{0, 2}));

  s = f.tlf.step(0, f.ab);
  ASSERT_TRUE(s);
  EXPECT_EQ(s->target, 2);
  EXPECT_TRUE(f.tlf.emissions.get(s->emission).empty());

  EXPECT_FALSE(f.tlf.step(0, f.b));
  EXPECT_FALSE(f.tlf.step(1, f.eos));
}

TEST(TokenLexingFst, StepIsFunction) {
  Bc f;
  for (const auto& row : f.tlf.steps)
    for (std::size_t i = 1; i < row.size(); ++i) EXPECT_LT(row[i - 1].token, row[i].token);
}

TEST(TokenLexingFst, EmissionBounds) {
  Bc f;
  for (const auto& row : f.tlf.steps)
    for (const auto& s : row) {
      const auto& e = f.tlf.emissions.get(s.emission);
      if (s.token == f.eos) {
        ASSERT_FALSE(e.empty());
        EXPECT_EQ(e.back(), f.tlf.end_marker);
        EXPECT_EQ(s.target, f.tlf.initial);
        EXPECT_LE(e.size(), 2u);
      } else {
        for (auto t : e) EXPECT_NE(t, f.tlf.end_marker);
        EXPECT_LE(e.size(), f.v.bytes(s.token).size());
      }
    }
}

TEST(TokenLexingFst, ReplayAgreesWithCharacterLevel) {
  Bc f;
  for (std::size_t q = 0; q < f.tlf.num_states(); ++q)
    for (const auto& s : f.tlf.steps[q]) {
      if (s.token == f.eos) continue;
      StateId to;
      TerminalSeq out;
      ASSERT_TRUE(replay_lexing_fst(f.lex, static_cast<StateId>(q), f.v.bytes(s.token), false,
                                    to, out));
      EXPECT_EQ(to, s.target);
      EXPECT_EQ(out, f.tlf.emissions.get(s.emission));
    }
}

TEST(TokenLexingFst, ThreadCountDoesNotChangeResult) {
  Bc f;
  EXPECT_EQ(compose_and_determinize(f.lex, f.detok, f.v, 3), f.tlf);
}

TEST(TokenLexingFstProperty, ExhaustiveBc) {
  Bc f;
  auto seqs = testkit::all_token_sequences(f.v, 4);
  auto c = testkit::token_fst_matches_reference(f.g, f.v, seqs);
  EXPECT_TRUE(c.ok) << c.detail;
  EXPECT_GT(c.cases, 1000u);
}

TEST(TokenLexingFstProperty, RandomInstances) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto inst = oracle::random_instance(seed);
    auto seqs = testkit::all_token_sequences(inst.vocab, 2);
    auto c = testkit::token_fst_matches_reference(inst.grammar, inst.vocab, seqs);
    EXPECT_TRUE(c.ok) << "seed " << seed << ": " << c.detail;
  }
}
