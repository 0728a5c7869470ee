#include "gcd/oracle/earley.hpp"

#include <algorithm>
#include <set>

namespace gcd::oracle {

Earley::Earley(const Grammar& g) {
  const auto num_nt = static_cast<std::int32_t>(g.nonterminals.size());
  rules_.push_back({num_nt, {~g.start}});
  for (const auto& r : g.rules) {
    IRule ir{r.lhs, {}};
    for (const auto& s : r.rhs) ir.rhs.push_back(s.is_terminal() ? s.index : ~s.index);
    rules_.push_back(std::move(ir));
  }
  by_lhs_.resize(static_cast<std::size_t>(num_nt) + 1);
  for (std::size_t i = 0; i < rules_.size(); ++i)
    by_lhs_[static_cast<std::size_t>(rules_[i].lhs)].push_back(static_cast<std::int32_t>(i));

  nullable_.assign(static_cast<std::size_t>(num_nt) + 1, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : rules_) {
      if (nullable_[static_cast<std::size_t>(r.lhs)]) continue;
      bool all = std::all_of(r.rhs.begin(), r.rhs.end(), [&](std::int32_t s) {
        return s < 0 && nullable_[static_cast<std::size_t>(~s)];
      });
      if (all) nullable_[static_cast<std::size_t>(r.lhs)] = changed = true;
    }
  }

  std::vector<Item> start{{0, 0, kSelf}};
  close(start);
  intern(std::move(start));
}

std::int32_t Earley::next(const Item& it) const {
  const auto& rhs = rules_[static_cast<std::size_t>(it.rule)].rhs;
  // Returns INT32_MIN at the end of the rule.
  if (static_cast<std::size_t>(it.dot) >= rhs.size()) return INT32_MIN;
  return rhs[static_cast<std::size_t>(it.dot)];
}

void Earley::close(std::vector<Item>& items) const {
  std::set<Item> seen(items.begin(), items.end());
  auto add = [&](const Item& it) {
    if (seen.insert(it).second) items.push_back(it);
  };
  for (std::size_t i = 0; i < items.size(); ++i) {
    Item it = items[i];
    std::int32_t s = next(it);
    if (s == INT32_MIN) {
      // Completion. Items born in this column are covered by the nullable
      // shortcut below.
      if (it.origin == kSelf) continue;
      const auto lhs = rules_[static_cast<std::size_t>(it.rule)].lhs;
      for (const Item& parent : columns_[static_cast<std::size_t>(it.origin)])
        if (next(parent) == ~lhs)
          add({parent.rule, parent.dot + 1, parent.origin == kSelf ? it.origin : parent.origin});
      continue;
    }
    if (s >= 0) continue;
    for (auto r : by_lhs_[static_cast<std::size_t>(~s)]) add({r, 0, kSelf});
    if (nullable_[static_cast<std::size_t>(~s)]) add({it.rule, it.dot + 1, it.origin});
  }
}

std::int32_t Earley::intern(std::vector<Item> items) {
  std::sort(items.begin(), items.end());
  auto [it, fresh] = index_.emplace(items, static_cast<std::int32_t>(columns_.size()));
  if (fresh) columns_.push_back(std::move(items));
  return it->second;
}

std::int32_t Earley::advance(std::int32_t column, TerminalId t) {
  if (column < 0) return kDead;
  auto key = std::make_pair(column, t);
  if (auto it = transitions_.find(key); it != transitions_.end()) return it->second;
  std::vector<Item> items;
  for (const Item& it : columns_[static_cast<std::size_t>(column)])
    if (next(it) == t) items.push_back({it.rule, it.dot + 1, it.origin == kSelf ? column : it.origin});
  std::int32_t id = kDead;
  if (!items.empty()) {
    close(items);
    id = intern(std::move(items));
  }
  transitions_[key] = id;
  return id;
}

bool Earley::accepts(std::int32_t column) const {
  if (column < 0) return false;
  const Item want{0, 1, column == 0 ? kSelf : 0};
  const auto& items = columns_[static_cast<std::size_t>(column)];
  return std::binary_search(items.begin(), items.end(), want);
}

bool prefix_membership(const Grammar& g, std::span<const TerminalId> ts) {
  Earley e(g);
  std::int32_t col = e.initial();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] == g.end_marker()) return i + 1 == ts.size() && e.accepts(col);
    col = e.advance(col, ts[i]);
    if (col == Earley::kDead) return false;
  }
  return true;
}

}  // namespace gcd::oracle
