#include "gcd/lalr.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace gcd {

namespace {

// Symbols: terminals and `$` are [0, nt_base); nonterminal n is nt_base + n.
struct Item {
  std::int32_t rule;
  std::int32_t dot;
  auto operator<=>(const Item&) const = default;
};

using Bits = std::vector<bool>;

class LalrBuilder {
 public:
  explicit LalrBuilder(const Grammar& g) : g_(g) {
    nt_base_ = g.end_marker() + 1;
    hash_ = nt_base_;  // the propagation marker, one past `$`
    num_nt_ = static_cast<std::int32_t>(g.nonterminals.size());
    rules_.push_back({num_nt_, {nt_base_ + g.start}});
    for (const auto& r : g.rules) {
      std::vector<std::int32_t> rhs;
      for (const auto& s : r.rhs) rhs.push_back(s.is_terminal() ? s.index : nt_base_ + s.index);
      rules_.push_back({r.lhs, std::move(rhs)});
    }
    by_lhs_.resize(static_cast<std::size_t>(num_nt_) + 1);
    for (std::size_t i = 0; i < rules_.size(); ++i)
      by_lhs_[static_cast<std::size_t>(rules_[i].lhs)].push_back(static_cast<std::int32_t>(i));
    compute_first();
  }

  Pda build() {
    build_lr0();
    compute_lookaheads();
    return emit_table();
  }

 private:
  struct IRule {
    std::int32_t lhs;
    std::vector<std::int32_t> rhs;
  };

  bool is_nt(std::int32_t s) const { return s >= nt_base_; }
  std::size_t la_width() const { return static_cast<std::size_t>(hash_) + 1; }

  void compute_first() {
    nullable_.assign(static_cast<std::size_t>(num_nt_) + 1, false);
    first_.assign(static_cast<std::size_t>(num_nt_) + 1, Bits(la_width(), false));
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& r : rules_) {
        auto lhs = static_cast<std::size_t>(r.lhs);
        bool all_nullable = true;
        for (auto s : r.rhs) {
          if (!is_nt(s)) {
            if (!first_[lhs][static_cast<std::size_t>(s)]) first_[lhs][static_cast<std::size_t>(s)] = changed = true;
            all_nullable = false;
            break;
          }
          auto n = static_cast<std::size_t>(s - nt_base_);
          for (std::size_t t = 0; t < la_width(); ++t)
            if (first_[n][t] && !first_[lhs][t]) first_[lhs][t] = changed = true;
          if (!nullable_[n]) {
            all_nullable = false;
            break;
          }
        }
        if (all_nullable && !nullable_[lhs]) nullable_[lhs] = changed = true;
      }
    }
  }

  // FIRST(rhs[from..]) into `out`; returns whether that suffix is nullable.
  bool first_of(const std::vector<std::int32_t>& rhs, std::size_t from, Bits& out) const {
    for (std::size_t i = from; i < rhs.size(); ++i) {
      auto s = rhs[i];
      if (!is_nt(s)) {
        out[static_cast<std::size_t>(s)] = true;
        return false;
      }
      auto n = static_cast<std::size_t>(s - nt_base_);
      for (std::size_t t = 0; t < la_width(); ++t)
        if (first_[n][t]) out[t] = true;
      if (!nullable_[n]) return false;
    }
    return true;
  }

  std::int32_t next_symbol(const Item& it) const {
    const auto& rhs = rules_[static_cast<std::size_t>(it.rule)].rhs;
    return static_cast<std::size_t>(it.dot) < rhs.size() ? rhs[static_cast<std::size_t>(it.dot)] : -1;
  }

  std::vector<Item> lr0_closure(const std::vector<Item>& kernel) const {
    std::set<Item> seen(kernel.begin(), kernel.end());
    std::vector<Item> out(kernel.begin(), kernel.end());
    for (std::size_t i = 0; i < out.size(); ++i) {
      auto s = next_symbol(out[i]);
      if (s < 0 || !is_nt(s)) continue;
      for (auto r : by_lhs_[static_cast<std::size_t>(s - nt_base_)]) {
        Item it{r, 0};
        if (seen.insert(it).second) out.push_back(it);
      }
    }
    return out;
  }

  void build_lr0() {
    std::map<std::vector<Item>, StateId> index;
    kernels_.push_back({{0, 0}});
    index[kernels_[0]] = 0;
    for (std::size_t q = 0; q < kernels_.size(); ++q) {
      auto items = lr0_closure(kernels_[q]);
      std::map<std::int32_t, std::vector<Item>> moves;
      for (const auto& it : items) {
        auto s = next_symbol(it);
        if (s >= 0) moves[s].push_back({it.rule, it.dot + 1});
      }
      std::map<std::int32_t, StateId> trans;
      for (auto& [sym, kernel] : moves) {
        std::sort(kernel.begin(), kernel.end());
        auto [it, fresh] = index.emplace(kernel, static_cast<StateId>(kernels_.size()));
        if (fresh) kernels_.push_back(kernel);
        trans[sym] = it->second;
      }
      trans_.push_back(std::move(trans));
    }
  }

  std::size_t kernel_pos(StateId q, const Item& it) const {
    const auto& k = kernels_[static_cast<std::size_t>(q)];
    return static_cast<std::size_t>(std::lower_bound(k.begin(), k.end(), it) - k.begin());
  }

  // LR(1) closure where each item carries a lookahead set.
  std::map<Item, Bits> lr1_closure(const std::map<Item, Bits>& seed) const {
    std::map<Item, Bits> items = seed;
    std::vector<Item> work;
    for (const auto& [it, _] : items) work.push_back(it);
    while (!work.empty()) {
      Item it = work.back();
      work.pop_back();
      auto s = next_symbol(it);
      if (s < 0 || !is_nt(s)) continue;
      Bits la(la_width(), false);
      const auto& rhs = rules_[static_cast<std::size_t>(it.rule)].rhs;
      if (first_of(rhs, static_cast<std::size_t>(it.dot) + 1, la)) {
        const Bits& src = items.at(it);
        for (std::size_t t = 0; t < la_width(); ++t)
          if (src[t]) la[t] = true;
      }
      for (auto r : by_lhs_[static_cast<std::size_t>(s - nt_base_)]) {
        Item ni{r, 0};
        auto [pos, fresh] = items.emplace(ni, Bits(la_width(), false));
        bool changed = fresh;
        for (std::size_t t = 0; t < la_width(); ++t)
          if (la[t] && !pos->second[t]) pos->second[t] = changed = true;
        if (changed) work.push_back(ni);
      }
    }
    return items;
  }

  void compute_lookaheads() {
    la_.resize(kernels_.size());
    for (std::size_t q = 0; q < kernels_.size(); ++q)
      la_[q].assign(kernels_[q].size(), Bits(la_width(), false));
    la_[0][0][static_cast<std::size_t>(g_.end_marker())] = true;

    // propagate[(q, k)] -> list of (q', k')
    std::vector<std::vector<std::vector<std::pair<StateId, std::size_t>>>> prop(kernels_.size());
    for (std::size_t q = 0; q < kernels_.size(); ++q) {
      prop[q].resize(kernels_[q].size());
      for (std::size_t k = 0; k < kernels_[q].size(); ++k) {
        Bits marker(la_width(), false);
        marker[static_cast<std::size_t>(hash_)] = true;
        auto closure = lr1_closure({{kernels_[q][k], marker}});
        for (const auto& [it, la] : closure) {
          auto s = next_symbol(it);
          if (s < 0) continue;
          StateId target = trans_[q].at(s);
          std::size_t tk = kernel_pos(target, {it.rule, it.dot + 1});
          auto& dst = la_[static_cast<std::size_t>(target)][tk];
          for (std::size_t t = 0; t < static_cast<std::size_t>(hash_); ++t)
            if (la[t]) dst[t] = true;
          if (la[static_cast<std::size_t>(hash_)]) prop[q][k].push_back({target, tk});
        }
      }
    }
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t q = 0; q < kernels_.size(); ++q)
        for (std::size_t k = 0; k < kernels_[q].size(); ++k)
          for (auto [tq, tk] : prop[q][k]) {
            auto& dst = la_[static_cast<std::size_t>(tq)][tk];
            const auto& src = la_[q][k];
            for (std::size_t t = 0; t < la_width(); ++t)
              if (src[t] && !dst[t]) dst[t] = changed = true;
          }
    }
  }

  std::string rule_text(std::int32_t r) const {
    if (r == 0) return "augmented start rule";
    const auto& rule = g_.rules[static_cast<std::size_t>(r - 1)];
    std::string s = g_.nonterminals[static_cast<std::size_t>(rule.lhs)] + " :";
    for (const auto& sym : rule.rhs) s += " " + sym.name;
    return s;
  }

  Pda emit_table() {
    Pda p;
    p.num_terminals = g_.end_marker() + 1;
    p.num_nonterminals = num_nt_;
    for (const auto& r : rules_) p.rules.push_back({r.lhs, static_cast<std::int32_t>(r.rhs.size())});
    const auto n = kernels_.size();
    p.action.assign(n, std::vector<Action>(static_cast<std::size_t>(p.num_terminals)));
    p.goto_.assign(n, std::vector<StateId>(static_cast<std::size_t>(num_nt_), kNoState));

    for (std::size_t q = 0; q < n; ++q) {
      for (const auto& [sym, target] : trans_[q]) {
        if (is_nt(sym)) {
          p.goto_[q][static_cast<std::size_t>(sym - nt_base_)] = target;
        } else {
          p.action[q][static_cast<std::size_t>(sym)] = {Action::Kind::Shift, target};
        }
      }
      std::map<Item, Bits> seed;
      for (std::size_t k = 0; k < kernels_[q].size(); ++k) seed[kernels_[q][k]] = la_[q][k];
      for (const auto& [it, la] : lr1_closure(seed)) {
        if (next_symbol(it) >= 0) continue;
        for (TerminalId t = 0; t < p.num_terminals; ++t) {
          if (!la[static_cast<std::size_t>(t)]) continue;
          Action want = it.rule == 0 ? Action{Action::Kind::Accept, 0}
                                     : Action{Action::Kind::Reduce, it.rule};
          Action& cur = p.action[q][static_cast<std::size_t>(t)];
          if (cur.kind == Action::Kind::Error) {
            cur = want;
          } else if (cur != want) {
            std::ostringstream msg;
            msg << (cur.kind == Action::Kind::Shift ? "shift/reduce" : "reduce/reduce")
                << " conflict in state " << q << " on lookahead " << g_.terminal_name(t)
                << ": ";
            if (cur.kind == Action::Kind::Shift)
              msg << "shift vs reduce by '" << rule_text(it.rule) << "'";
            else
              msg << "reduce by '" << rule_text(cur.arg) << "' vs '" << rule_text(it.rule) << "'";
            throw ConflictError(msg.str());
          }
        }
      }
    }
    return p;
  }

  const Grammar& g_;
  std::int32_t nt_base_ = 0, hash_ = 0, num_nt_ = 0;
  std::vector<IRule> rules_;
  std::vector<std::vector<std::int32_t>> by_lhs_;
  std::vector<bool> nullable_;
  std::vector<Bits> first_;
  std::vector<std::vector<Item>> kernels_;
  std::vector<std::map<std::int32_t, StateId>> trans_;
  std::vector<std::vector<Bits>> la_;
};

}  // namespace

Pda build_lalr_pda(const Grammar& g) { return LalrBuilder(g).build(); }

PrefixResult pda_accepts_prefix(const Pda& p, StateId q, std::span<const StateId> stack,
                                std::span<const TerminalId> alpha, std::size_t* inspected) {
  // The real stack is read-only; pops below the local pushes move `base`.
  std::size_t base = stack.size();
  std::vector<StateId> local{q};
  PrefixResult result = PrefixResult::Accepted;
  auto done = [&](PrefixResult r) {
    result = r;
    return true;
  };
  for (TerminalId t : alpha) {
    bool stop = false;
    for (;;) {
      const Action& a = p.act(local.back(), t);
      if (a.kind == Action::Kind::Shift) {
        local.push_back(a.arg);
        break;
      }
      if (a.kind == Action::Kind::Accept) break;
      if (a.kind == Action::Kind::Error) {
        stop = done(PrefixResult::Rejected);
        break;
      }
      const auto& rule = p.rules[static_cast<std::size_t>(a.arg)];
      auto n = static_cast<std::size_t>(rule.rhs_len);
      if (n >= local.size() + base) {
        base = 0;
        stop = done(PrefixResult::Underflow);
        break;
      }
      if (n < local.size()) {
        local.resize(local.size() - n);
      } else {
        std::size_t from_base = n - local.size() + 1;
        base -= from_base;
        local.assign(1, stack[base]);
      }
      StateId g = p.go(local.back(), rule.lhs);
      if (g == kNoState) {
        stop = done(PrefixResult::Rejected);
        break;
      }
      local.push_back(g);
    }
    if (stop) break;
    if (t == p.end_marker()) break;
  }
  // base is the lowest index still on the stack; the one below it was read
  // when a reduce exposed stack[base].
  if (inspected) *inspected = stack.size() - base;
  return result;
}

FeedResult lr_feed(const Pda& p, StateId& top, std::vector<StateId>& below, TerminalId t) {
  for (;;) {
    const Action& a = p.act(top, t);
    switch (a.kind) {
      case Action::Kind::Error:
        return FeedResult::Error;
      case Action::Kind::Accept:
        return FeedResult::Accepted;
      case Action::Kind::Shift:
        below.push_back(top);
        top = a.arg;
        return FeedResult::Shifted;
      case Action::Kind::Reduce: {
        const auto& rule = p.rules[static_cast<std::size_t>(a.arg)];
        auto n = static_cast<std::size_t>(rule.rhs_len);
        if (n > below.size()) return FeedResult::Error;
        if (n > 0) {
          top = below[below.size() - n];
          below.resize(below.size() - n);
        }
        StateId g = p.go(top, rule.lhs);
        if (g == kNoState) return FeedResult::Error;
        below.push_back(top);
        top = g;
        break;
      }
    }
  }
}

StrippedFsa strip_stack_fsa(const Pda& p) {
  StrippedFsa f;
  const auto n = p.num_states();
  f.shifts.resize(n);
  f.eps.resize(n);
  f.accepts_end.assign(n, false);
  std::vector<std::vector<StateId>> goto_targets(static_cast<std::size_t>(p.num_nonterminals));
  for (std::size_t q = 0; q < n; ++q)
    for (std::int32_t a = 0; a < p.num_nonterminals; ++a)
      if (auto g = p.go(static_cast<StateId>(q), a); g != kNoState)
        goto_targets[static_cast<std::size_t>(a)].push_back(g);
  for (auto& v : goto_targets) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  for (std::size_t q = 0; q < n; ++q) {
    std::set<StateId> eps;
    for (TerminalId t = 0; t < p.num_terminals; ++t) {
      const Action& a = p.action[q][static_cast<std::size_t>(t)];
      if (a.kind == Action::Kind::Shift) f.shifts[q].push_back({t, a.arg});
      if (a.kind == Action::Kind::Accept) f.accepts_end[q] = true;
      if (a.kind == Action::Kind::Reduce) {
        auto lhs = p.rules[static_cast<std::size_t>(a.arg)].lhs;
        for (auto g : goto_targets[static_cast<std::size_t>(lhs)]) eps.insert(g);
      }
    }
    f.eps[q].assign(eps.begin(), eps.end());
  }
  return f;
}

bool stripped_accepts(const StrippedFsa& f, StateId q, std::span<const TerminalId> alpha,
                      TerminalId end_marker) {
  std::vector<char> cur(f.num_states(), 0);
  auto close = [&](std::vector<char>& set) {
    std::vector<StateId> work;
    for (std::size_t s = 0; s < set.size(); ++s)
      if (set[s]) work.push_back(static_cast<StateId>(s));
    while (!work.empty()) {
      auto s = work.back();
      work.pop_back();
      for (auto t : f.eps[static_cast<std::size_t>(s)])
        if (!set[static_cast<std::size_t>(t)]) {
          set[static_cast<std::size_t>(t)] = 1;
          work.push_back(t);
        }
    }
  };
  cur[static_cast<std::size_t>(q)] = 1;
  close(cur);
  for (TerminalId t : alpha) {
    if (t == end_marker) {
      for (std::size_t s = 0; s < cur.size(); ++s)
        if (cur[s] && f.accepts_end[s]) return true;
      return false;
    }
    std::vector<char> next(f.num_states(), 0);
    bool any = false;
    for (std::size_t s = 0; s < cur.size(); ++s) {
      if (!cur[s]) continue;
      const auto& row = f.shifts[s];
      auto it = std::lower_bound(row.begin(), row.end(), std::pair<TerminalId, StateId>{t, -1});
      if (it != row.end() && it->first == t) {
        next[static_cast<std::size_t>(it->second)] = 1;
        any = true;
      }
    }
    if (!any) return false;
    close(next);
    cur.swap(next);
  }
  return true;
}

std::string dump_lr_table(const Pda& p, const Grammar& g) {
  std::ostringstream out;
  out << "state\tsymbol\taction\n";
  for (std::size_t q = 0; q < p.num_states(); ++q) {
    for (TerminalId t = 0; t < p.num_terminals; ++t) {
      const Action& a = p.action[q][static_cast<std::size_t>(t)];
      if (a.kind == Action::Kind::Error) continue;
      out << q << '\t' << g.terminal_name(t) << '\t';
      switch (a.kind) {
        case Action::Kind::Shift: out << 's' << a.arg; break;
        case Action::Kind::Reduce: out << 'r' << a.arg; break;
        case Action::Kind::Accept: out << "acc"; break;
        case Action::Kind::Error: break;
      }
      out << '\n';
    }
    for (std::int32_t a = 0; a < p.num_nonterminals; ++a)
      if (auto tgt = p.go(static_cast<StateId>(q), a); tgt != kNoState)
        out << q << '\t' << g.nonterminals[static_cast<std::size_t>(a)] << "\tg" << tgt << '\n';
  }
  return out.str();
}

}  // namespace gcd
