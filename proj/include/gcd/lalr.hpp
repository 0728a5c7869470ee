#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gcd/grammar.hpp"
#include "gcd/types.hpp"

namespace gcd {

struct Action {
  enum class Kind : std::uint8_t { Error, Shift, Reduce, Accept };
  Kind kind = Kind::Error;
  std::int32_t arg = -1;  // target state for Shift, rule index for Reduce

  bool operator==(const Action&) const = default;
};

/// Deterministic LALR(1) parse table. Rule 0 is the augmented rule
/// `S' -> start`; rule i > 0 is grammar rule i - 1. The stack alphabet is the
/// state ids.
struct Pda {
  struct RuleShape {
    std::int32_t lhs = 0;  // num_nonterminals for the augmented rule
    std::int32_t rhs_len = 0;
    bool operator==(const RuleShape&) const = default;
  };

  std::int32_t num_terminals = 0;     // columns: terminals then `$`
  std::int32_t num_nonterminals = 0;
  StateId start_state = 0;
  std::vector<RuleShape> rules;
  std::vector<std::vector<Action>> action;   // [state][terminal or $]
  std::vector<std::vector<StateId>> goto_;   // [state][nonterminal]

  std::size_t num_states() const { return action.size(); }
  TerminalId end_marker() const { return num_terminals - 1; }
  const Action& act(StateId q, TerminalId t) const {
    return action[static_cast<std::size_t>(q)][static_cast<std::size_t>(t)];
  }
  StateId go(StateId q, std::int32_t nt) const {
    return goto_[static_cast<std::size_t>(q)][static_cast<std::size_t>(nt)];
  }

  bool operator==(const Pda&) const = default;
};

/// Throws ConflictError naming the state and lookahead on any conflict.
Pda build_lalr_pda(const Grammar& g);

enum class PrefixResult : std::uint8_t { Accepted, Rejected, Underflow };

/// Runs `alpha` from state `q` with `stack` (bottom first) below it.
/// `inspected`, when given, receives how many entries of `stack` the run
/// read, counted from the top.
PrefixResult pda_accepts_prefix(const Pda& p, StateId q, std::span<const StateId> stack,
                                std::span<const TerminalId> alpha,
                                std::size_t* inspected = nullptr);

enum class FeedResult : std::uint8_t { Error, Shifted, Accepted };

/// Feeds one terminal (or `$`) to the configuration `below ++ [top]`,
/// reducing as needed. On Error the configuration is unspecified.
FeedResult lr_feed(const Pda& p, StateId& top, std::vector<StateId>& below, TerminalId t);

/// The PDA with its stack removed: shift edges plus, for every state with
/// some reduce, epsilon edges to every goto target of the reduced symbol.
struct StrippedFsa {
  std::vector<std::vector<std::pair<TerminalId, StateId>>> shifts;  // sorted by terminal
  std::vector<std::vector<StateId>> eps;
  std::vector<bool> accepts_end;  // accept action on `$`

  std::size_t num_states() const { return shifts.size(); }
};

StrippedFsa strip_stack_fsa(const Pda& p);

/// Prefix acceptance of `alpha` from `q`; a trailing `$` must hit accept.
bool stripped_accepts(const StrippedFsa& f, StateId q, std::span<const TerminalId> alpha,
                      TerminalId end_marker);

/// TSV `state\tsymbol\taction` with actions `s<n>`, `r<n>`, `acc` and `g<n>`.
std::string dump_lr_table(const Pda& p, const Grammar& g);

}  // namespace gcd
