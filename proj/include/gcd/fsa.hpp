#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gcd/grammar.hpp"
#include "gcd/regex.hpp"
#include "gcd/types.hpp"

namespace gcd {

/// Thompson-style nondeterministic automaton with byte-set edges.
struct Nfa {
  struct State {
    std::vector<StateId> eps;
    std::vector<std::pair<ByteSet, StateId>> edges;
    TerminalId accept = -1;
  };
  std::vector<State> states;
  StateId start = 0;
  StateId final = 0;

  bool accepts(std::string_view input) const;
};

/// Fragment accepting exactly L(pattern); `final` is its single accept state.
Nfa compile_regex(const RegexNode& pattern);

/// Deterministic lexing automaton with terminal-labelled accepting states.
///
/// Partial transition function, no dead states, and the initial state has
/// no incoming edges. States are numbered breadth-first from the initial
/// state with bytes visited in ascending order.
struct Fsa {
  using Row = std::array<StateId, 256>;

  StateId initial = 0;
  std::vector<Row> next;
  std::vector<TerminalId> label;  // -1 when not accepting
  TerminalId num_terminals = 0;

  std::size_t num_states() const { return next.size(); }
  StateId step(StateId q, std::uint8_t c) const { return next[static_cast<std::size_t>(q)][c]; }
  bool accepting(StateId q) const { return label[static_cast<std::size_t>(q)] >= 0; }
  /// Runs `input` from the initial state; kNoState if it falls off.
  StateId run(std::string_view input) const;
};

struct LexingAutomatonReport {
  /// Terminals that label no state because a higher-priority terminal
  /// accepts every one of their lexemes.
  std::vector<TerminalId> shadowed;
  std::vector<std::string> warnings;
};

/// Union of all terminal languages, determinized, minimized, dead states
/// removed; longest match first, then lowest priority wins a label.
Fsa build_lexing_automaton(const std::vector<TerminalDef>& terminals,
                           LexingAutomatonReport* report = nullptr);

/// `src -c-> dst` per edge (consecutive bytes with one target are folded
/// into `[x-y]`), and `q accept NAME` per accepting state.
std::string dump_fsa(const Fsa& a, const Grammar& g);

/// Printable form of a byte for dumps.
std::string escape_byte(std::uint8_t b);
std::string escape_bytes(std::string_view s);

}  // namespace gcd
