#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcd/error.hpp"
#include "gcd/regex.hpp"
#include "gcd/types.hpp"

namespace gcd {

struct SourceLoc {
  int line = 0;
  int column = 0;
  bool operator==(const SourceLoc&) const = default;
};

struct TerminalDef {
  std::string name;
  RegexNode pattern;
  int priority = 0;  // declaration order, 0 = first
  bool ignored = false;
  SourceLoc loc;

  bool operator==(const TerminalDef& o) const {
    return name == o.name && pattern == o.pattern && priority == o.priority &&
           ignored == o.ignored;
  }
};

struct Symbol {
  enum class Kind : std::uint8_t { Terminal, Nonterminal, Unresolved };
  Kind kind = Kind::Unresolved;
  std::int32_t index = -1;
  std::string name;

  bool is_terminal() const { return kind == Kind::Terminal; }
  bool is_nonterminal() const { return kind == Kind::Nonterminal; }
  bool operator==(const Symbol& o) const {
    return kind == o.kind && index == o.index && name == o.name;
  }
};

struct Rule {
  std::int32_t lhs = 0;
  std::vector<Symbol> rhs;
  SourceLoc loc;

  bool operator==(const Rule& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

/// Terminal regexes plus context-free rules. Terminal ids are positions in
/// `terminals`; the end marker `$` is the id one past the last terminal.
struct Grammar {
  std::vector<TerminalDef> terminals;
  std::vector<std::string> nonterminals;
  std::vector<SourceLoc> nonterminal_locs;
  std::int32_t start = 0;
  std::vector<Rule> rules;

  TerminalId end_marker() const { return static_cast<TerminalId>(terminals.size()); }
  std::optional<TerminalId> find_terminal(std::string_view name) const;
  std::optional<std::int32_t> find_nonterminal(std::string_view name) const;
  bool is_ignored(TerminalId t) const {
    return t < end_marker() && terminals[static_cast<std::size_t>(t)].ignored;
  }
  /// Terminal name, or "$" for the end marker.
  const std::string& terminal_name(TerminalId t) const;
  std::string sequence_to_string(const TerminalSeq& seq) const;

  bool operator==(const Grammar& o) const {
    return terminals == o.terminals && nonterminals == o.nonterminals && start == o.start &&
           rules == o.rules;
  }
};

/// Parses the grammar file format:
///
///     // comment
///     NAME : /regex/ ;
///     rule : SYM sym ... | ... ;
///     %ignore NAME ;
///
/// Terminal names are upper case, nonterminals lower case; the first
/// nonterminal defined is the start symbol. Throws GrammarError.
Grammar parse_grammar_spec(std::string_view text);

/// One diagnostic per violated invariant; empty when the grammar is valid.
/// Codes: undefined-symbol, duplicate-terminal, duplicate-nonterminal,
/// bad-terminal-name, bad-nonterminal-name, nullable-terminal,
/// unproductive, unreachable, bad-start, end-marker-in-rule,
/// ignored-in-rule, no-terminals.
std::vector<Diagnostic> validate_grammar(const Grammar& g);

/// Pretty-printer producing text accepted by parse_grammar_spec.
std::string render_grammar(const Grammar& g);

}  // namespace gcd
