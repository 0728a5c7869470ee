#include "gcd/spanner.hpp"

#include <algorithm>
#include <map>

namespace gcd {

ProducibleMap producible_terminals(const LexingFst& lex) {
  const std::size_t n = lex.num_states();
  std::vector<std::vector<StateId>> preds(n);
  for (std::size_t q = 0; q < n; ++q)
    for (int c = 0; c < 256; ++c) {
      const auto& e = lex.edges[q][static_cast<std::size_t>(c)];
      if (e.target != kNoState && e.emit < 0) preds[static_cast<std::size_t>(e.target)].push_back(static_cast<StateId>(q));
    }
  // A terminal T labelling q is producible from every state that reaches q
  // through emission-free edges.
  std::vector<std::vector<bool>> has(n, std::vector<bool>(static_cast<std::size_t>(lex.end_marker), false));
  for (std::size_t q = 0; q < n; ++q) {
    TerminalId t = lex.label[q];
    if (t < 0 || has[q][static_cast<std::size_t>(t)]) continue;
    std::vector<StateId> work{static_cast<StateId>(q)};
    has[q][static_cast<std::size_t>(t)] = true;
    while (!work.empty()) {
      auto s = work.back();
      work.pop_back();
      for (auto p : preds[static_cast<std::size_t>(s)])
        if (!has[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)]) {
          has[static_cast<std::size_t>(p)][static_cast<std::size_t>(t)] = true;
          work.push_back(p);
        }
    }
  }
  ProducibleMap prod(n);
  for (std::size_t q = 0; q < n; ++q)
    for (TerminalId t = 0; t < lex.end_marker; ++t)
      if (has[q][static_cast<std::size_t>(t)]) prod[q].push_back(t);
  return prod;
}

const SpannerTables::Entry* SpannerTables::find(StateId q, SeqId seq) const {
  if (q < 0 || static_cast<std::size_t>(q) >= t_inv.size()) return nullptr;
  const auto& row = t_inv[static_cast<std::size_t>(q)];
  auto it = std::lower_bound(row.begin(), row.end(), seq,
                             [](const Entry& e, SeqId s) { return e.seq < s; });
  if (it == row.end() || it->seq != seq) return nullptr;
  return &*it;
}

SpannerTables build_spanner_tables(const TokenLexingFst& tlf, const ProducibleMap& prod,
                                   const std::vector<bool>& ignored) {
  auto is_ignored = [&](TerminalId t) {
    return t >= 0 && static_cast<std::size_t>(t) < ignored.size() && ignored[static_cast<std::size_t>(t)];
  };
  SpannerTables s;
  s.prod = prod;
  s.t_inv.resize(tlf.num_states());
  for (std::size_t q = 0; q < tlf.num_states(); ++q) {
    std::map<SeqId, std::vector<TokenId>> row;
    auto add = [&](const TerminalSeq& seq, TokenId t) {
      auto& toks = row[s.sequences.intern(seq)];
      if (toks.empty() || toks.back() != t) toks.push_back(t);
    };
    for (const auto& st : tlf.steps[q]) {
      const TerminalSeq& raw = tlf.emissions.get(st.emission);
      TerminalSeq norm;
      for (auto t : raw)
        if (!is_ignored(t)) norm.push_back(t);
      if (!raw.empty() && raw.back() == tlf.end_marker) {
        add(norm, st.token);
        continue;
      }
      for (auto t : prod[static_cast<std::size_t>(st.target)]) {
        if (is_ignored(t)) {
          add(norm, st.token);
        } else {
          norm.push_back(t);
          add(norm, st.token);
          norm.pop_back();
        }
      }
    }
    for (auto& [seq, toks] : row) s.t_inv[q].push_back({seq, std::move(toks)});
  }
  return s;
}

TokenMask lookup_tokens(const SpannerTables& s, StateId q, SeqId seq, std::size_t vocab_size) {
  TokenMask m(vocab_size);
  if (const auto* e = s.find(q, seq)) m.set_all(e->tokens);
  return m;
}

std::vector<TerminalSeq> forward_cell(const TokenLexingFst& tlf, const ProducibleMap& prod,
                                      StateId q, TokenId t) {
  std::vector<TerminalSeq> out;
  auto st = tlf.step(q, t);
  if (!st) return out;
  const TerminalSeq& raw = tlf.emissions.get(st->emission);
  if (!raw.empty() && raw.back() == tlf.end_marker) {
    out.push_back(raw);
    return out;
  }
  for (auto p : prod[static_cast<std::size_t>(st->target)]) {
    TerminalSeq seq = raw;
    seq.push_back(p);
    out.push_back(std::move(seq));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string dump_spanner_csv(const TokenLexingFst& tlf, const ProducibleMap& prod,
                             const Grammar& g, const Vocabulary& v) {
  std::string out = "state,token,sequences\n";
  for (std::size_t q = 0; q < tlf.num_states(); ++q) {
    if (!tlf.reachable[q]) continue;
    for (std::size_t t = 0; t < v.size(); ++t) {
      auto cell = forward_cell(tlf, prod, static_cast<StateId>(q), static_cast<TokenId>(t));
      std::vector<std::string> names;
      for (const auto& seq : cell) names.push_back(g.sequence_to_string(seq));
      std::sort(names.begin(), names.end());
      std::string joined;
      for (std::size_t i = 0; i < names.size(); ++i) joined += (i ? ";" : "") + names[i];
      out += std::to_string(q) + "," + v.display(static_cast<TokenId>(t)) + "," + joined + "\n";
    }
  }
  return out;
}

}  // namespace gcd
