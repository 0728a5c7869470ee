#include "gcd/token_fst.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace gcd {

DetokenizingFst build_detokenizing_fst(const Vocabulary& v) {
  DetokenizingFst d;
  d.states.emplace_back();
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto id = static_cast<TokenId>(i);
    if (id == v.eos_id) continue;
    const std::string& tok = v.tokens[i];
    StateId prev = 0;
    for (std::size_t k = 0; k + 1 < tok.size(); ++k) {
      auto c = static_cast<std::uint8_t>(tok[k]);
      auto& kids = d.states[static_cast<std::size_t>(prev)].children;
      auto it = kids.find(c);
      if (it == kids.end()) {
        auto fresh = static_cast<StateId>(d.states.size());
        kids.emplace(c, fresh);
        DetokenizingFst::State s;
        s.prefix = tok.substr(0, k + 1);
        d.states.push_back(std::move(s));
        prev = fresh;
      } else {
        prev = it->second;
      }
    }
    d.states[static_cast<std::size_t>(prev)].finals.push_back(
        {id, static_cast<std::uint8_t>(tok.back())});
  }
  return d;
}

std::string dump_detokenizing_fst(const DetokenizingFst& d, const Vocabulary& v) {
  auto name = [&](StateId s) { return "q_" + (s == 0 ? std::string("eps") : escape_bytes(d.states[static_cast<std::size_t>(s)].prefix)); };
  std::string out;
  for (std::size_t s = 0; s < d.states.size(); ++s) {
    auto sid = static_cast<StateId>(s);
    for (const auto& [c, t] : d.states[s].children)
      out += name(sid) + " -eps:" + escape_byte(c) + "-> " + name(t) + "\n";
    for (const auto& f : d.states[s].finals)
      out += name(sid) + " -" + v.display(f.token) + ":" + escape_byte(f.last_byte) + "-> " + name(0) + "\n";
  }
  return out;
}

std::optional<TokenLexingFst::Step> TokenLexingFst::step(StateId q, TokenId t) const {
  if (q < 0 || static_cast<std::size_t>(q) >= steps.size()) return std::nullopt;
  const auto& row = steps[static_cast<std::size_t>(q)];
  auto it = std::lower_bound(row.begin(), row.end(), t,
                             [](const Step& s, TokenId tok) { return s.token < tok; });
  if (it == row.end() || it->token != t) return std::nullopt;
  return *it;
}

std::size_t TokenLexingFst::num_transitions() const {
  std::size_t n = 0;
  for (const auto& r : steps) n += r.size();
  return n;
}

unsigned build_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GCD_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return n;
}

namespace {

struct RawStep {
  TokenId token;
  StateId target;
  TerminalSeq emitted;
};

void walk(const LexingFst& lex, const DetokenizingFst& detok, StateId node, StateId q,
          TerminalSeq& emitted, std::vector<RawStep>& out) {
  const auto& st = detok.states[static_cast<std::size_t>(node)];
  for (const auto& f : st.finals) {
    const auto& e = lex.edge(q, f.last_byte);
    if (e.target == kNoState) continue;
    RawStep r{f.token, e.target, emitted};
    if (e.emit >= 0) r.emitted.push_back(e.emit);
    out.push_back(std::move(r));
  }
  for (const auto& [c, child] : st.children) {
    const auto& e = lex.edge(q, c);
    if (e.target == kNoState) continue;
    if (e.emit >= 0) emitted.push_back(e.emit);
    walk(lex, detok, child, e.target, emitted, out);
    if (e.emit >= 0) emitted.pop_back();
  }
}

}  // namespace

TokenLexingFst compose_and_determinize(const LexingFst& lex, const DetokenizingFst& detok,
                                       const Vocabulary& v, unsigned threads) {
  const std::size_t n = lex.num_states();
  std::vector<std::vector<RawStep>> raw(n);
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t q = begin; q < n; q += stride) {
      TerminalSeq emitted;
      walk(lex, detok, 0, static_cast<StateId>(q), emitted, raw[q]);
      if (lex.eos[q]) raw[q].push_back({v.eos_id, lex.initial, *lex.eos[q]});
      std::sort(raw[q].begin(), raw[q].end(),
                [](const RawStep& a, const RawStep& b) { return a.token < b.token; });
    }
  };
  if (threads == 0) threads = build_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work, i, threads);
    for (auto& t : pool) t.join();
  }

  TokenLexingFst tlf;
  tlf.initial = lex.initial;
  tlf.end_marker = lex.end_marker;
  tlf.eos_id = v.eos_id;
  tlf.vocab_size = v.size();
  tlf.reachable.assign(n, false);
  std::vector<StateId> queue{lex.initial};
  tlf.reachable[static_cast<std::size_t>(lex.initial)] = true;
  for (std::size_t i = 0; i < queue.size(); ++i)
    for (const auto& r : raw[static_cast<std::size_t>(queue[i])])
      if (!tlf.reachable[static_cast<std::size_t>(r.target)]) {
        tlf.reachable[static_cast<std::size_t>(r.target)] = true;
        queue.push_back(r.target);
      }

  tlf.steps.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    if (!tlf.reachable[q]) continue;
    auto& row = tlf.steps[q];
    row.reserve(raw[q].size());
    for (const auto& r : raw[q]) row.push_back({r.token, r.target, tlf.emissions.intern(r.emitted)});
  }
  return tlf;
}

}  // namespace gcd
