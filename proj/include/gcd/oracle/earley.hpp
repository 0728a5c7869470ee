#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "gcd/grammar.hpp"

namespace gcd::oracle {

/// Earley recognizer whose chart columns are interned: a column is a set of
/// items (rule, dot, origin) where origin names an earlier column by id or
/// is the column itself. Equal ids mean equal futures, so ids can be used
/// as canonical parser states. Column 0 is the empty input.
class Earley {
 public:
  static constexpr std::int32_t kDead = -1;

  explicit Earley(const Grammar& g);

  std::int32_t initial() const { return 0; }
  /// Column after reading terminal `t`, or kDead when no sentence has that
  /// prefix. `t` must not be the end marker.
  std::int32_t advance(std::int32_t column, TerminalId t);
  /// Whether the input read so far is a complete sentence.
  bool accepts(std::int32_t column) const;

  std::size_t num_columns() const { return columns_.size(); }

 private:
  static constexpr std::int32_t kSelf = -1;
  struct Item {
    std::int32_t rule, dot, origin;
    auto operator<=>(const Item&) const = default;
  };
  struct IRule {
    std::int32_t lhs;
    std::vector<std::int32_t> rhs;  // terminal t as t, nonterminal n as ~n
  };

  std::int32_t next(const Item& it) const;
  std::int32_t intern(std::vector<Item> items);
  void close(std::vector<Item>& items) const;

  std::vector<IRule> rules_;
  std::vector<std::vector<std::int32_t>> by_lhs_;
  std::vector<bool> nullable_;
  std::vector<std::vector<Item>> columns_;
  std::map<std::vector<Item>, std::int32_t> index_;
  std::map<std::pair<std::int32_t, TerminalId>, std::int32_t> transitions_;
};

/// True iff `ts` is a prefix of some sentence; a trailing `$` demands that
/// the part before it is a sentence. Ignored terminals must not appear.
bool prefix_membership(const Grammar& g, std::span<const TerminalId> ts);

}  // namespace gcd::oracle
