#include <gtest/gtest.h>

#include "gcd/fsa.hpp"
#include "gcd/lexing_fst.hpp"
#include "gcd/oracle/derivatives.hpp"
#include "testkit.hpp"

using namespace gcd;

namespace {

struct Bc {
  Grammar g = testkit::bc_grammar();
  Fsa a = build_lexing_automaton(g.terminals);
  LexingFst fst = build_lexing_fst(a);
  TerminalId B = 0, C = 1, End = 2;
};

}  // namespace

TEST(LexingFst, BoundaryEdge) {
  Bc f;
  const auto& e = f.fst.edge(2, 'a');
  EXPECT_EQ(e.target, 1);
  EXPECT_EQ(e.emit, f.B);
}

TEST(LexingFst, InLexemeLoopEmitsNothing) {
  Bc f;
  const auto& e = f.fst.edge(2, 'b');
  EXPECT_EQ(e.target, 2);
  EXPECT_EQ(e.emit, -1);
}

TEST(LexingFst, EosEdges) {
  Bc f;
  ASSERT_TRUE(f.fst.eos[2].has_value());
  EXPECT_EQ(*f.fst.eos[2], (TerminalSeq{f.B, f.End}));
  ASSERT_TRUE(f.fst.eos[3].has_value());
  EXPECT_EQ(*f.fst.eos[3], (TerminalSeq{f.C, f.End}));
  ASSERT_TRUE(f.fst.eos[0].has_value());
  EXPECT_EQ(*f.fst.eos[0], (TerminalSeq{f.End}));
  EXPECT_FALSE(f.fst.eos[1].has_value());
}

TEST(LexingFst, NoEdgeOutsideTerminals) {
  Bc f;
  EXPECT_EQ(f.fst.edge(0, 'b').target, kNoState);
  EXPECT_EQ(f.fst.edge(1, 'a').target, kNoState);
  EXPECT_EQ(f.fst.edge(3, 'b').target, kNoState);
}

TEST(LexingFst, Dump) {
  Bc f;
  std::string d = dump_lexing_fst(f.fst, f.g);
  EXPECT_NE(d.find("2 -a:B-> 1"), std::string::npos) << d;
  EXPECT_NE(d.find("2 -b:eps-> 2"), std::string::npos) << d;
  EXPECT_NE(d.find("2 -EOS:B$-> 0"), std::string::npos) << d;
  EXPECT_NE(d.find("0 -EOS:$-> 0"), std::string::npos) << d;
}

TEST(ReferenceLex, ResidualBeforeEos) {
  Bc f;
  auto r = reference_lex("abaccab", false, f.a);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->terminals, (TerminalSeq{f.B, f.C}));
  EXPECT_EQ(r->residual, "ab");
}

TEST(ReferenceLex, EosFlushesLexeme) {
  Bc f;
  auto r = reference_lex("ab", true, f.a);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->terminals, (TerminalSeq{f.B, f.End}));
  EXPECT_EQ(r->residual, "");
}

TEST(ReferenceLex, Undefined) {
  Bc f;
  EXPECT_FALSE(reference_lex("abd", false, f.a).has_value());
  EXPECT_FALSE(reference_lex("a", true, f.a).has_value());
  EXPECT_FALSE(reference_lex("b", false, f.a).has_value());
}

TEST(ReferenceLex, EmptyInput) {
  Bc f;
  auto r = reference_lex("", false, f.a);
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(r->terminals.empty());
  EXPECT_TRUE(r->residual.empty());
}

TEST(ReferenceLex, AutomatonAndDerivativesAgree) {
  Bc f;
  oracle::DerivativeLexemes d(f.g.terminals);
  for (const auto& w : testkit::all_strings("abc", 6))
    for (bool eos : {false, true})
      EXPECT_EQ(reference_lex(w, eos, f.a), reference_lex(w, eos, d)) << w;
}

TEST(ReferenceLex, MaximalMunch) {
  Grammar g = parse_grammar_spec(
      "PLUS : /\\+/ ; INC : /\\+\\+/ ; X : /x/ ; s : X | s PLUS X | s INC ;");
  Fsa a = build_lexing_automaton(g.terminals);
  auto r = reference_lex("x++x", true, a);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->terminals, (TerminalSeq{2, 1, 2, 3}));
}

TEST(ReferenceLex, OneLookahead) {
  // Appending one byte changes the emission by at most one terminal.
  Bc f;
  for (const auto& w : testkit::all_strings("abc", 5)) {
    auto r = reference_lex(w, false, f.a);
    if (!r) continue;
    for (char c : std::string("abc")) {
      auto r2 = reference_lex(w + c, false, f.a);
      if (!r2) continue;
      ASSERT_GE(r2->terminals.size(), r->terminals.size());
      EXPECT_LE(r2->terminals.size() - r->terminals.size(), 1u) << w << c;
      EXPECT_TRUE(std::equal(r->terminals.begin(), r->terminals.end(), r2->terminals.begin()));
    }
  }
}

TEST(LexingFstProperty, ExhaustiveBc) {
  auto c = testkit::lexing_fst_matches_reference(testkit::bc_grammar(),
                                                 testkit::all_strings("abc", 6));
  EXPECT_TRUE(c.ok) << c.detail;
  EXPECT_EQ(c.cases, 2u * 1093u);  // with and without EOS
}

TEST(LexingFstProperty, RandomConfigStrings) {
  auto inputs = testkit::random_strings(7, "{}[]\":,=+;#ab01 \n\\ltrue", 2000, 12);
  auto c = testkit::lexing_fst_matches_reference(testkit::config_grammar(), inputs);
  EXPECT_TRUE(c.ok) << c.detail;
}
