#include "gcd/oracle/random_instance.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "gcd/fsa.hpp"
#include "gcd/lalr.hpp"
#include "gcd/lexing_fst.hpp"
#include "gcd/spanner.hpp"
#include "gcd/token_fst.hpp"

namespace gcd::oracle {

Vocabulary alphabet_vocabulary(const InstanceSize& size) {
  Vocabulary v;
  std::vector<std::string> layer{""};
  for (int len = 1; len <= size.max_token_len; ++len) {
    std::vector<std::string> next;
    for (const auto& p : layer)
      for (char c : size.alphabet) next.push_back(p + c);
    v.tokens.insert(v.tokens.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  v.eos_id = static_cast<TokenId>(v.tokens.size());
  v.tokens.emplace_back();
  return v;
}

namespace {

class Sampler {
 public:
  Sampler(std::uint64_t seed, const InstanceSize& size) : rng_(seed), size_(size) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  char letter() { return size_.alphabet[static_cast<std::size_t>(uniform(0, static_cast<int>(size_.alphabet.size()) - 1))]; }

  std::string atom() {
    if (uniform(0, 3) == 0) {
      char a = letter(), b = letter();
      if (a == b) return std::string(1, a);
      return std::string("[") + std::min(a, b) + std::max(a, b) + "]";
    }
    return std::string(1, letter());
  }

  std::string pattern() {
    switch (uniform(0, 5)) {
      case 0: return atom();
      case 1: return atom() + atom();
      case 2: return atom() + "+";
      case 3: return atom() + atom() + "*";
      case 4: return "(" + atom() + "|" + atom() + atom() + ")";
      default: return atom() + atom() + "?";
    }
  }

  std::string grammar() {
    int nt = uniform(1, size_.max_terminals);
    int nn = uniform(1, size_.max_nonterminals);
    int nr = uniform(nn, std::max(nn, size_.max_rules));
    std::ostringstream out;
    for (int i = 0; i < nt; ++i) out << static_cast<char>('A' + i) << " : /" << pattern() << "/ ;\n";
    std::vector<std::vector<std::string>> alts(static_cast<std::size_t>(nn));
    for (int r = 0; r < nr; ++r) {
      int lhs = r < nn ? r : uniform(0, nn - 1);
      std::string rhs;
      int len = uniform(0, 3);
      if (len == 0 && uniform(0, 2) != 0) len = 1;
      for (int k = 0; k < len; ++k) {
        if (!rhs.empty()) rhs += ' ';
        if (uniform(0, 2) == 0 && nn > 1)
          rhs += "n" + std::to_string(uniform(0, nn - 1));
        else
          rhs += std::string(1, static_cast<char>('A' + uniform(0, nt - 1)));
      }
      alts[static_cast<std::size_t>(lhs)].push_back(rhs);
    }
    for (int n = 0; n < nn; ++n) {
      out << "n" << n << " :";
      const auto& a = alts[static_cast<std::size_t>(n)];
      for (std::size_t i = 0; i < a.size(); ++i) out << (i ? " |" : "") << (a[i].empty() ? "" : " ") << a[i];
      out << " ;\n";
    }
    return out.str();
  }

 private:
  std::mt19937_64 rng_;
  InstanceSize size_;
};

}  // namespace

bool lexically_realizable(const Grammar& g, const Vocabulary& v) {
  Fsa fsa = build_lexing_automaton(g.terminals);
  LexingFst lex = build_lexing_fst(fsa);
  TokenLexingFst tlf = compose_and_determinize(lex, build_detokenizing_fst(v), v, 1);
  ProducibleMap prod = producible_terminals(lex);

  std::set<TerminalId> used;
  for (const auto& r : g.rules)
    for (const auto& s : r.rhs)
      if (s.is_terminal()) used.insert(s.index);

  const auto n = static_cast<StateId>(lex.num_states());
  const StateId pending_end = n;  // emitted a terminal via EOS, only `$` may follow

  auto closure = [&](std::set<StateId> set) {
    std::vector<StateId> work(set.begin(), set.end());
    while (!work.empty()) {
      StateId q = work.back();
      work.pop_back();
      if (q == pending_end) continue;
      for (const auto& e : lex.edges[static_cast<std::size_t>(q)])
        if (e.target != kNoState && e.emit < 0 && set.insert(e.target).second) work.push_back(e.target);
    }
    return set;
  };
  auto move = [&](const std::set<StateId>& set, TerminalId t) {
    std::set<StateId> out;
    for (StateId q : set) {
      if (q == pending_end) continue;
      for (const auto& e : lex.edges[static_cast<std::size_t>(q)])
        if (e.target != kNoState && e.emit == t) out.insert(e.target);
      const auto& eos = lex.eos[static_cast<std::size_t>(q)];
      if (eos && eos->size() == 2 && (*eos)[0] == t) out.insert(pending_end);
    }
    return closure(std::move(out));
  };
  auto can_end = [&](const std::set<StateId>& set) {
    for (StateId q : set) {
      if (q == pending_end) return true;
      const auto& eos = lex.eos[static_cast<std::size_t>(q)];
      if (eos && eos->size() == 1) return true;
    }
    return false;
  };

  for (StateId q = 0; q < n; ++q) {
    if (!tlf.reachable[static_cast<std::size_t>(q)]) continue;
    for (TerminalId t : prod[static_cast<std::size_t>(q)]) {
      if (!used.count(t)) continue;
      std::set<std::set<StateId>> seen;
      std::vector<std::set<StateId>> work{move(closure({q}), t)};
      while (!work.empty()) {
        auto cur = std::move(work.back());
        work.pop_back();
        if (!seen.insert(cur).second) continue;
        if (cur.empty() || !can_end(cur)) return false;
        for (TerminalId u : used) work.push_back(move(cur, u));
      }
    }
  }
  return true;
}

Instance random_instance(std::uint64_t seed, const InstanceSize& size) {
  Sampler s(seed, size);
  Instance inst;
  inst.vocab = alphabet_vocabulary(size);
  for (;;) {
    ++inst.attempts;
    std::string text = s.grammar();
    try {
      Grammar g = parse_grammar_spec(text);
      if (static_cast<int>(g.rules.size()) > size.max_rules) continue;
      build_lalr_pda(g);
      if (!lexically_realizable(g, inst.vocab)) continue;
      inst.grammar_text = std::move(text);
      inst.grammar = std::move(g);
      return inst;
    } catch (const Error&) {
      continue;
    }
  }
}

}  // namespace gcd::oracle
