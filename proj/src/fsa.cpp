#include "gcd/fsa.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "gcd/error.hpp"

namespace gcd {

namespace {

class NfaBuilder {
 public:
  explicit NfaBuilder(Nfa& nfa) : nfa_(nfa) {}

  StateId add() {
    nfa_.states.emplace_back();
    return static_cast<StateId>(nfa_.states.size() - 1);
  }

  void eps(StateId from, StateId to) { nfa_.states[static_cast<std::size_t>(from)].eps.push_back(to); }

  // Returns (start, final) of a fragment for `n`.
  std::pair<StateId, StateId> build(const RegexNode& n) {
    using K = RegexNode::Kind;
    switch (n.kind) {
      case K::Literal:
      case K::Class:
      case K::AnyByte: {
        StateId s = add();
        StateId f = add();
        nfa_.states[static_cast<std::size_t>(s)].edges.emplace_back(leaf_bytes(n), f);
        return {s, f};
      }
      case K::Concat: {
        StateId s = add();
        StateId cur = s;
        for (const auto& c : n.children) {
          auto [cs, cf] = build(c);
          eps(cur, cs);
          cur = cf;
        }
        return {s, cur};
      }
      case K::Alternation: {
        StateId s = add();
        StateId f = add();
        for (const auto& c : n.children) {
          auto [cs, cf] = build(c);
          eps(s, cs);
          eps(cf, f);
        }
        return {s, f};
      }
      case K::Star:
      case K::Plus:
      case K::Optional: {
        StateId s = add();
        StateId f = add();
        auto [cs, cf] = build(n.children.front());
        eps(s, cs);
        eps(cf, f);
        if (n.kind != K::Plus) eps(s, f);
        if (n.kind != K::Optional) eps(cf, cs);
        return {s, f};
      }
      case K::Repeat: {
        StateId s = add();
        StateId cur = s;
        std::vector<StateId> optional_exits;
        for (int i = 0; i < n.max; ++i) {
          auto [cs, cf] = build(n.children.front());
          eps(cur, cs);
          if (i >= n.min) optional_exits.push_back(cur);
          cur = cf;
        }
        StateId f = add();
        eps(cur, f);
        for (auto e : optional_exits) eps(e, f);
        return {s, f};
      }
    }
    throw Error("unreachable regex kind");
  }

 private:
  Nfa& nfa_;
};

void eps_closure(const Nfa& nfa, std::vector<StateId>& set) {
  std::vector<bool> in(nfa.states.size(), false);
  for (auto s : set) in[static_cast<std::size_t>(s)] = true;
  std::vector<StateId> work = set;
  while (!work.empty()) {
    auto s = work.back();
    work.pop_back();
    for (auto t : nfa.states[static_cast<std::size_t>(s)].eps) {
      if (!in[static_cast<std::size_t>(t)]) {
        in[static_cast<std::size_t>(t)] = true;
        set.push_back(t);
        work.push_back(t);
      }
    }
  }
  std::sort(set.begin(), set.end());
}

// Partition of the 256 byte values into classes that no edge distinguishes.
std::vector<int> byte_classes(const Nfa& nfa, int& count) {
  std::vector<ByteSet> distinct;
  std::set<std::string> keys;
  for (const auto& st : nfa.states)
    for (const auto& [set, _] : st.edges)
      if (keys.insert(set.to_string()).second) distinct.push_back(set);
  std::map<std::vector<bool>, int> sig_to_class;
  std::vector<int> cls(256);
  for (int b = 0; b < 256; ++b) {
    std::vector<bool> sig(distinct.size());
    for (std::size_t i = 0; i < distinct.size(); ++i) sig[i] = distinct[i].test(static_cast<std::size_t>(b));
    auto [it, _] = sig_to_class.emplace(sig, static_cast<int>(sig_to_class.size()));
    cls[static_cast<std::size_t>(b)] = it->second;
  }
  count = static_cast<int>(sig_to_class.size());
  return cls;
}

struct RawDfa {
  std::vector<std::vector<StateId>> next;  // [state][class], kNoState when absent
  std::vector<TerminalId> label;
  StateId initial = 0;
};

RawDfa determinize(const Nfa& nfa, const std::vector<int>& cls, int num_classes) {
  std::vector<int> rep(static_cast<std::size_t>(num_classes), -1);
  for (int b = 0; b < 256; ++b)
    if (rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(b)])] < 0)
      rep[static_cast<std::size_t>(cls[static_cast<std::size_t>(b)])] = b;

  RawDfa dfa;
  std::map<std::vector<StateId>, StateId> ids;
  std::deque<std::vector<StateId>> queue;
  std::vector<StateId> init{nfa.start};
  eps_closure(nfa, init);
  auto intern = [&](std::vector<StateId> set) {
    auto [it, fresh] = ids.emplace(set, static_cast<StateId>(ids.size()));
    if (fresh) {
      TerminalId label = -1;
      for (auto s : set) {
        TerminalId a = nfa.states[static_cast<std::size_t>(s)].accept;
        if (a >= 0 && (label < 0 || a < label)) label = a;
      }
      dfa.label.push_back(label);
      dfa.next.emplace_back(static_cast<std::size_t>(num_classes), kNoState);
      queue.push_back(std::move(set));
    }
    return it->second;
  };
  dfa.initial = intern(init);
  StateId cur = 0;
  while (!queue.empty()) {
    auto set = std::move(queue.front());
    queue.pop_front();
    for (int c = 0; c < num_classes; ++c) {
      auto byte = static_cast<std::size_t>(rep[static_cast<std::size_t>(c)]);
      std::vector<StateId> target;
      for (auto s : set)
        for (const auto& [bytes, t] : nfa.states[static_cast<std::size_t>(s)].edges)
          if (bytes.test(byte)) target.push_back(t);
      if (target.empty()) continue;
      std::sort(target.begin(), target.end());
      target.erase(std::unique(target.begin(), target.end()), target.end());
      eps_closure(nfa, target);
      StateId t = intern(std::move(target));
      dfa.next[static_cast<std::size_t>(cur)][static_cast<std::size_t>(c)] = t;
    }
    ++cur;
  }
  return dfa;
}

// Hopcroft partition refinement over the completed automaton (an explicit
// sink stands in for missing edges). Returns the block of each state; the
// sink is the last state.
std::vector<int> hopcroft(const RawDfa& dfa, int num_classes, int& num_blocks) {
  const int n = static_cast<int>(dfa.next.size()) + 1;
  const int sink = n - 1;
  auto target = [&](int q, int c) {
    if (q == sink) return sink;
    StateId t = dfa.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)];
    return t == kNoState ? sink : t;
  };
  // inverse[c][q] = predecessors of q on class c
  std::vector<std::vector<std::vector<int>>> inverse(
      static_cast<std::size_t>(num_classes), std::vector<std::vector<int>>(static_cast<std::size_t>(n)));
  for (int q = 0; q < n; ++q)
    for (int c = 0; c < num_classes; ++c)
      inverse[static_cast<std::size_t>(c)][static_cast<std::size_t>(target(q, c))].push_back(q);

  std::map<TerminalId, int> by_label;
  std::vector<int> block(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> blocks;
  for (int q = 0; q < n; ++q) {
    TerminalId l = q == sink ? -1 : dfa.label[static_cast<std::size_t>(q)];
    auto [it, fresh] = by_label.emplace(l, static_cast<int>(blocks.size()));
    if (fresh) blocks.emplace_back();
    blocks[static_cast<std::size_t>(it->second)].push_back(q);
    block[static_cast<std::size_t>(q)] = it->second;
  }

  std::deque<std::pair<int, int>> work;
  std::vector<std::vector<char>> queued;
  auto enqueue = [&](int b, int c) {
    if (!queued[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]) {
      queued[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] = 1;
      work.emplace_back(b, c);
    }
  };
  for (std::size_t b = 0; b < blocks.size(); ++b) queued.emplace_back(static_cast<std::size_t>(num_classes), 0);
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    for (int c = 0; c < num_classes; ++c) enqueue(b, c);

  std::vector<int> mark_count;
  std::vector<char> marked(static_cast<std::size_t>(n), 0);
  while (!work.empty()) {
    auto [splitter, c] = work.front();
    work.pop_front();
    queued[static_cast<std::size_t>(splitter)][static_cast<std::size_t>(c)] = 0;

    std::vector<int> pre;
    for (int q : blocks[static_cast<std::size_t>(splitter)])
      for (int p : inverse[static_cast<std::size_t>(c)][static_cast<std::size_t>(q)])
        if (!marked[static_cast<std::size_t>(p)]) {
          marked[static_cast<std::size_t>(p)] = 1;
          pre.push_back(p);
        }
    std::set<int> touched;
    for (int p : pre) touched.insert(block[static_cast<std::size_t>(p)]);
    for (int b : touched) {
      auto& members = blocks[static_cast<std::size_t>(b)];
      std::vector<int> in, out;
      for (int q : members) (marked[static_cast<std::size_t>(q)] ? in : out).push_back(q);
      if (out.empty()) continue;
      int fresh = static_cast<int>(blocks.size());
      members = std::move(in);
      blocks.push_back(std::move(out));
      queued.emplace_back(static_cast<std::size_t>(num_classes), 0);
      for (int q : blocks[static_cast<std::size_t>(fresh)]) block[static_cast<std::size_t>(q)] = fresh;
      for (int cc = 0; cc < num_classes; ++cc) {
        if (queued[static_cast<std::size_t>(b)][static_cast<std::size_t>(cc)]) {
          enqueue(fresh, cc);
        } else {
          bool fresh_smaller = blocks[static_cast<std::size_t>(fresh)].size() <= blocks[static_cast<std::size_t>(b)].size();
          enqueue(fresh_smaller ? fresh : b, cc);
        }
      }
    }
    for (int p : pre) marked[static_cast<std::size_t>(p)] = 0;
  }
  num_blocks = static_cast<int>(blocks.size());
  return block;
}

}  // namespace

bool Nfa::accepts(std::string_view input) const {
  std::vector<StateId> cur{start};
  eps_closure(*this, cur);
  for (unsigned char c : input) {
    std::vector<StateId> nxt;
    for (auto s : cur)
      for (const auto& [bytes, t] : states[static_cast<std::size_t>(s)].edges)
        if (bytes.test(c)) nxt.push_back(t);
    std::sort(nxt.begin(), nxt.end());
    nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
    eps_closure(*this, nxt);
    cur = std::move(nxt);
    if (cur.empty()) return false;
  }
  return std::binary_search(cur.begin(), cur.end(), final);
}

Nfa compile_regex(const RegexNode& pattern) {
  Nfa nfa;
  NfaBuilder b(nfa);
  auto [s, f] = b.build(pattern);
  nfa.start = s;
  nfa.final = f;
  return nfa;
}

StateId Fsa::run(std::string_view input) const {
  StateId q = initial;
  for (unsigned char c : input) {
    q = step(q, c);
    if (q == kNoState) return kNoState;
  }
  return q;
}

Fsa build_lexing_automaton(const std::vector<TerminalDef>& terminals,
                           LexingAutomatonReport* report) {
  if (terminals.empty()) throw Error("lexing automaton needs at least one terminal");
  Nfa nfa;
  NfaBuilder builder(nfa);
  StateId start = builder.add();
  nfa.start = start;
  for (std::size_t i = 0; i < terminals.size(); ++i) {
    if (regex_nullable(terminals[i].pattern))
      throw Error("terminal " + terminals[i].name + " matches the empty string");
    auto [s, f] = builder.build(terminals[i].pattern);
    builder.eps(start, s);
    nfa.states[static_cast<std::size_t>(f)].accept = static_cast<TerminalId>(i);
  }

  int num_classes = 0;
  auto cls = byte_classes(nfa, num_classes);
  RawDfa raw = determinize(nfa, cls, num_classes);

  int num_blocks = 0;
  auto block = hopcroft(raw, num_classes, num_blocks);
  const int sink = static_cast<int>(raw.next.size());
  const int dead_block = block[static_cast<std::size_t>(sink)];
  if (block[static_cast<std::size_t>(raw.initial)] == dead_block)
    throw Error("terminal patterns accept no string");

  // Collapse blocks; the dead block and every edge into it are dropped.
  std::vector<std::vector<int>> row(static_cast<std::size_t>(num_blocks));
  std::vector<TerminalId> label(static_cast<std::size_t>(num_blocks), -1);
  for (int q = 0; q < sink; ++q) {
    int b = block[static_cast<std::size_t>(q)];
    if (!row[static_cast<std::size_t>(b)].empty()) continue;
    label[static_cast<std::size_t>(b)] = raw.label[static_cast<std::size_t>(q)];
    auto& r = row[static_cast<std::size_t>(b)];
    r.assign(static_cast<std::size_t>(num_classes), -1);
    for (int c = 0; c < num_classes; ++c) {
      StateId t = raw.next[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)];
      if (t == kNoState) continue;
      int tb = block[static_cast<std::size_t>(t)];
      if (tb != dead_block) r[static_cast<std::size_t>(c)] = tb;
    }
  }
  int initial = block[static_cast<std::size_t>(raw.initial)];

  // The transducer treats the initial state as "between lexemes"; keep it free of
  // incoming edges by cloning it when minimization merged it with a
  // mid-lexeme state.
  bool reentered = false;
  for (int b = 0; b < num_blocks && !reentered; ++b)
    if (b != dead_block)
      for (int t : row[static_cast<std::size_t>(b)])
        if (t == initial) reentered = true;
  if (reentered) {
    row.push_back(row[static_cast<std::size_t>(initial)]);
    label.push_back(label[static_cast<std::size_t>(initial)]);
    initial = static_cast<int>(row.size()) - 1;
  }

  // Breadth-first renumbering.
  std::vector<StateId> order_id(row.size(), kNoState);
  std::vector<int> order;
  order_id[static_cast<std::size_t>(initial)] = 0;
  order.push_back(initial);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& r = row[static_cast<std::size_t>(order[i])];
    for (int b = 0; b < 256; ++b) {
      int t = r[static_cast<std::size_t>(cls[static_cast<std::size_t>(b)])];
      if (t >= 0 && order_id[static_cast<std::size_t>(t)] == kNoState) {
        order_id[static_cast<std::size_t>(t)] = static_cast<StateId>(order.size());
        order.push_back(t);
      }
    }
  }

  Fsa fsa;
  fsa.initial = 0;
  fsa.num_terminals = static_cast<TerminalId>(terminals.size());
  fsa.next.resize(order.size());
  fsa.label.resize(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& r = row[static_cast<std::size_t>(order[i])];
    fsa.label[i] = label[static_cast<std::size_t>(order[i])];
    for (int b = 0; b < 256; ++b) {
      int t = r[static_cast<std::size_t>(cls[static_cast<std::size_t>(b)])];
      fsa.next[i][static_cast<std::size_t>(b)] = t >= 0 ? order_id[static_cast<std::size_t>(t)] : kNoState;
    }
  }

  if (report) {
    std::vector<bool> used(terminals.size(), false);
    for (auto l : fsa.label)
      if (l >= 0) used[static_cast<std::size_t>(l)] = true;
    for (std::size_t i = 0; i < terminals.size(); ++i) {
      if (used[i]) continue;
      report->shadowed.push_back(static_cast<TerminalId>(i));
      report->warnings.push_back("pattern-conflict: terminal " + terminals[i].name +
                                 " is never produced; a higher-priority terminal matches all of its lexemes");
    }
  }
  return fsa;
}

std::string escape_byte(std::uint8_t b) {
  static const char* hex = "0123456789abcdef";
  switch (b) {
    case '\n': return "\\n";
    case '\t': return "\\t";
    case '\r': return "\\r";
    case '\\': return "\\\\";
    case ' ': return "\\x20";
    case ',': return "\\x2c";
    default: break;
  }
  if (b < 0x21 || b >= 0x7f) return std::string("\\x") + hex[b >> 4] + hex[b & 15];
  return std::string(1, static_cast<char>(b));
}

std::string escape_bytes(std::string_view s) {
  std::string out;
  for (unsigned char c : s) out += escape_byte(c);
  return out;
}

std::string dump_fsa(const Fsa& a, const Grammar& g) {
  std::string out;
  for (std::size_t q = 0; q < a.num_states(); ++q) {
    int b = 0;
    while (b < 256) {
      StateId t = a.next[q][static_cast<std::size_t>(b)];
      if (t == kNoState) {
        ++b;
        continue;
      }
      int e = b;
      while (e + 1 < 256 && a.next[q][static_cast<std::size_t>(e + 1)] == t) ++e;
      std::string lab = escape_byte(static_cast<std::uint8_t>(b));
      if (e > b) lab = "[" + lab + "-" + escape_byte(static_cast<std::uint8_t>(e)) + "]";
      out += std::to_string(q) + " -" + lab + "-> " + std::to_string(t) + "\n";
      b = e + 1;
    }
    if (a.label[q] >= 0) out += std::to_string(q) + " accept " + g.terminal_name(a.label[q]) + "\n";
  }
  return out;
}

}  // namespace gcd
