#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "gcd/grammar.hpp"
#include "gcd/lexing_fst.hpp"

namespace gcd::oracle {

/// Brzozowski-derivative view of the terminal regexes. Answers lexeme
/// questions directly from the regex trees, without any automaton.
class DerivativeLexemes final : public LexemeOracle {
 public:
  explicit DerivativeLexemes(const std::vector<TerminalDef>& terminals);
  ~DerivativeLexemes() override;

  bool is_live_prefix(std::string_view s) const override;
  TerminalId accepted_terminal(std::string_view s) const override;
  TerminalId end_marker() const override { return static_cast<TerminalId>(roots_.size()); }

  /// Terminals whose language has `s` as a prefix of some member.
  std::vector<TerminalId> live_terminals(std::string_view s) const;
  /// Whether terminal `t` matches `s` exactly.
  bool matches(TerminalId t, std::string_view s) const;

  struct Node;
  using Ptr = std::shared_ptr<const Node>;

 private:
  const std::vector<Ptr>& derivatives(std::string_view s) const;

  std::vector<Ptr> roots_;
  mutable std::map<std::string, std::vector<Ptr>, std::less<>> memo_;
};

}  // namespace gcd::oracle
