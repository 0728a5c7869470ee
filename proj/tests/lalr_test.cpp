#include <gtest/gtest.h>

#include "gcd/lalr.hpp"
#include "gcd/oracle/random_instance.hpp"
#include "testkit.hpp"

using namespace gcd;

namespace {

constexpr TerminalId B = 0, C = 1, End = 2;

PrefixResult run(const Pda& p, StateId q, std::vector<StateId> stack, std::vector<TerminalId> alpha) {
  return pda_accepts_prefix(p, q, stack, alpha);
}

}  // namespace

TEST(BuildLalr, BcTable) {
  const auto& a = testkit::bc_artifact();
  EXPECT_EQ(a.pda.num_states(), 5u);
  EXPECT_EQ(a.pda.start_state, 0);
  EXPECT_EQ(dump_lr_table(a.pda, a.grammar),
            testkit::read_file(std::string(GCD_GOLDEN_DIR) + "/bc_lr.tsv"));
  // The start state shifts only B.
  int actions = 0;
  for (TerminalId t = 0; t < a.pda.num_terminals; ++t)
    if (a.pda.act(0, t).kind != Action::Kind::Error) {
      ++actions;
      EXPECT_EQ(t, B);
      EXPECT_EQ(a.pda.act(0, t).kind, Action::Kind::Shift);
    }
  EXPECT_EQ(actions, 1);
}

TEST(BuildLalr, AmbiguousGrammarConflicts) {
  Grammar g = parse_grammar_spec("A : /a/ ; s : s s | A ;");
  try {
    build_lalr_pda(g);
    FAIL();
  } catch (const ConflictError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("state"), std::string::npos) << msg;
    EXPECT_NE(msg.find("A"), std::string::npos) << msg;
  }
}

TEST(BuildLalr, SingleRuleAcceptsExactlyA) {
  Pda p = build_lalr_pda(parse_grammar_spec("A : /a/ ; s : A ;"));
  EXPECT_EQ(run(p, p.start_state, {}, {0, 1}), PrefixResult::Accepted);
  EXPECT_EQ(run(p, p.start_state, {}, {1}), PrefixResult::Rejected);
  EXPECT_EQ(run(p, p.start_state, {}, {0, 0}), PrefixResult::Rejected);
  EXPECT_EQ(run(p, p.start_state, {}, {0}), PrefixResult::Accepted);
}

TEST(BuildLalr, IgnoredTerminalsHaveNoActions) {
  Grammar g = parse_grammar_spec("A : /a/ ; WS : / / ; %ignore WS ; s : A | A s ;");
  Pda p = build_lalr_pda(g);
  for (std::size_t q = 0; q < p.num_states(); ++q)
    EXPECT_EQ(p.act(static_cast<StateId>(q), 1).kind, Action::Kind::Error);
}

TEST(BuildLalr, EmptyRules) {
  Grammar g = parse_grammar_spec("A : /a/ ; s : items ; items : | items A ;");
  Pda p = build_lalr_pda(g);
  EXPECT_EQ(run(p, p.start_state, {}, {1}), PrefixResult::Accepted);
  EXPECT_EQ(run(p, p.start_state, {}, {0, 0, 0, 1}), PrefixResult::Accepted);
}

TEST(BuildLalr, ConfigGrammarConflictFree) {
  EXPECT_NO_THROW(build_lalr_pda(testkit::config_grammar()));
}

TEST(PdaAcceptsPrefix, BcGrammar) {
  const Pda& p = testkit::bc_artifact().pda;
  EXPECT_EQ(run(p, 0, {}, {B}), PrefixResult::Accepted);
  EXPECT_EQ(run(p, 0, {}, {C}), PrefixResult::Rejected);
  EXPECT_EQ(run(p, 0, {}, {B, C, B, C, End}), PrefixResult::Accepted);
  EXPECT_EQ(run(p, 0, {}, {B, End}), PrefixResult::Rejected);
  // After B C with nothing below, $ reduces past the local stack.
  EXPECT_EQ(run(p, 3, {}, {End}), PrefixResult::Underflow);
  EXPECT_EQ(run(p, 3, {0, 1}, {End}), PrefixResult::Accepted);
  EXPECT_EQ(run(p, 3, {}, {B}), PrefixResult::Accepted);
}

TEST(PdaAcceptsPrefix, ReportsInspectedDepth) {
  const Pda& p = testkit::bc_artifact().pda;
  std::vector<StateId> stack{0, 1};
  std::vector<TerminalId> alpha{End};
  std::size_t inspected = 0;
  EXPECT_EQ(pda_accepts_prefix(p, 3, stack, alpha, &inspected), PrefixResult::Accepted);
  EXPECT_EQ(inspected, 2u);
  alpha = {B};
  EXPECT_EQ(pda_accepts_prefix(p, 3, stack, alpha, &inspected), PrefixResult::Accepted);
  EXPECT_EQ(inspected, 0u);
}

TEST(LrFeed, BcSentence) {
  const Pda& p = testkit::bc_artifact().pda;
  StateId top = p.start_state;
  std::vector<StateId> below;
  EXPECT_EQ(lr_feed(p, top, below, B), FeedResult::Shifted);
  EXPECT_EQ(lr_feed(p, top, below, C), FeedResult::Shifted);
  EXPECT_EQ(top, 3);
  EXPECT_EQ(below, (std::vector<StateId>{0, 1}));
  EXPECT_EQ(lr_feed(p, top, below, End), FeedResult::Accepted);
}

TEST(LrFeed, RejectsBadTerminal) {
  const Pda& p = testkit::bc_artifact().pda;
  StateId top = p.start_state;
  std::vector<StateId> below;
  EXPECT_EQ(lr_feed(p, top, below, C), FeedResult::Error);
}

TEST(StrippedFsa, BcGrammar) {
  const Pda& p = testkit::bc_artifact().pda;
  StrippedFsa f = strip_stack_fsa(p);
  std::vector<TerminalId> bcb{B, C, B}, c{C}, bc_end{B, C, End}, bcbc_end{B, C, B, C, End};
  EXPECT_TRUE(stripped_accepts(f, 0, bcb, End));
  EXPECT_FALSE(stripped_accepts(f, 0, c, End));
  EXPECT_TRUE(stripped_accepts(f, 0, bc_end, End));
  EXPECT_TRUE(stripped_accepts(f, 0, bcbc_end, End));
  // State 3 reduces s := B C, whose goto targets are 2 and 4.
  EXPECT_EQ(f.eps[3], (std::vector<StateId>{2, 4}));
  EXPECT_TRUE(f.accepts_end[2]);
}

TEST(PdaProperty, StackInvarianceBc) {
  auto c = testkit::stack_invariance(testkit::bc_artifact().pda, 1, 300, 10);
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(PdaProperty, StackInvarianceConfig) {
  Pda p = build_lalr_pda(testkit::config_grammar());
  auto c = testkit::stack_invariance(p, 2, 300, 10);
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(PdaProperty, OverapproximationBc) {
  auto c = testkit::overapproximation(testkit::bc_artifact().pda, 3, 300, 5);
  EXPECT_TRUE(c.ok) << c.detail;
}

TEST(PdaProperty, OverapproximationRandomInstances) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto inst = oracle::random_instance(seed);
    auto c = testkit::overapproximation(build_lalr_pda(inst.grammar), seed, 100, 5);
    EXPECT_TRUE(c.ok) << "seed " << seed << ": " << c.detail;
  }
}
