#include "gcd/oracle/mask_oracle.hpp"

#include <algorithm>

namespace gcd::oracle {

MaskOracle::MaskOracle(const Grammar& g, const Vocabulary& v, OracleConfig cfg)
    : g_(g), v_(v), cfg_(cfg), lexemes_(g.terminals), earley_(g) {
  // Bytes that behave identically in every regex leaf are interchangeable
  // for the search; keep one representative per class among the bytes the
  // vocabulary can produce.
  std::vector<ByteSet> leaves;
  for (const auto& t : g.terminals) for_each_leaf(t.pattern, [&](const ByteSet& s) { leaves.push_back(s); });
  ByteSet available;
  for (const auto& tok : v.tokens)
    for (unsigned char c : tok) available.set(c);
  std::map<std::vector<bool>, std::uint8_t> classes;
  for (int c = 0; c < 256; ++c) {
    if (!available.test(static_cast<std::size_t>(c))) continue;
    std::vector<bool> sig;
    for (const auto& l : leaves) sig.push_back(l.test(static_cast<std::size_t>(c)));
    classes.emplace(sig, static_cast<std::uint8_t>(c));
  }
  for (const auto& [sig, c] : classes) byte_reps_.push_back(c);
  std::sort(byte_reps_.begin(), byte_reps_.end());
}

std::int32_t MaskOracle::feed_terminal(std::int32_t column, TerminalId t) {
  if (g_.is_ignored(t)) return column;
  return earley_.advance(column, t);
}

MaskOracle::State MaskOracle::feed(const State& s, std::string_view bytes) {
  State out = s;
  for (unsigned char c : bytes) {
    if (out.dead) return out;
    LexResult lr{{}, std::move(out.residual)};
    if (!reference_lex_step(lr, c, lexemes_)) {
      out.dead = true;
      out.residual.clear();
      return out;
    }
    for (auto t : lr.terminals) {
      out.column = feed_terminal(out.column, t);
      if (out.column == Earley::kDead) break;
    }
    out.residual = std::move(lr.residual);
    if (out.column == Earley::kDead) {
      out.dead = true;
      out.residual.clear();
      return out;
    }
    // The residual will be emitted as one of its live terminals.
    bool any = false;
    for (auto t : lexemes_.live_terminals(out.residual))
      if (feed_terminal(out.column, t) != Earley::kDead) {
        any = true;
        break;
      }
    if (!any) {
      out.dead = true;
      out.residual.clear();
    }
  }
  return out;
}

bool MaskOracle::eos_accepts(const State& s) {
  if (s.dead) return false;
  std::int32_t col = s.column;
  if (!s.residual.empty()) {
    TerminalId t = lexemes_.accepted_terminal(s.residual);
    if (t < 0) return false;
    col = feed_terminal(col, t);
  }
  return earley_.accepts(col);
}

MaskOracle::Outcome MaskOracle::completable(const State& s, int budget) {
  if (s.dead) return Outcome::Exhausted;
  if (eos_accepts(s)) return Outcome::Found;
  auto key = std::make_pair(s.column, s.residual);
  Memo& m = memo_[key];
  if (m.exhausted) return Outcome::Exhausted;
  if (m.found_at <= budget) return Outcome::Found;
  if (m.cut_at >= budget) return Outcome::Cut;
  if (budget == 0) {
    m.cut_at = std::max(m.cut_at, 0);
    return Outcome::Cut;
  }
  bool cut = false;
  for (auto c : byte_reps_) {
    std::string one(1, static_cast<char>(c));
    Outcome o = completable(feed(s, one), budget - 1);
    if (o == Outcome::Found) {
      Memo& mm = memo_[key];
      mm.found_at = std::min(mm.found_at, budget);
      return Outcome::Found;
    }
    if (o == Outcome::Cut) cut = true;
  }
  Memo& mm = memo_[key];
  if (cut) {
    mm.cut_at = std::max(mm.cut_at, budget);
    return Outcome::Cut;
  }
  mm.exhausted = true;
  return Outcome::Exhausted;
}

MaskOracle::Result MaskOracle::mask(const State& s) {
  Result r{TokenMask(v_.size()), TokenMask(v_.size())};
  for (std::size_t i = 0; i < v_.size(); ++i) {
    auto t = static_cast<TokenId>(i);
    if (t == v_.eos_id) {
      if (eos_accepts(s)) r.mask.set(t);
      continue;
    }
    switch (completable(feed(s, v_.bytes(t)), cfg_.horizon)) {
      case Outcome::Found: r.mask.set(t); break;
      case Outcome::Cut: r.undecided.set(t); break;
      case Outcome::Exhausted: break;
    }
  }
  return r;
}

std::optional<MaskOracle::State> MaskOracle::after(const std::vector<TokenId>& prefix) {
  State s = initial();
  for (auto t : prefix) {
    if (t == v_.eos_id) return std::nullopt;
    s = feed(s, v_.bytes(t));
    if (s.dead) return std::nullopt;
  }
  return s;
}

TokenMask oracle_mask(const Grammar& g, const Vocabulary& v, const std::vector<TokenId>& prefix,
                      const OracleConfig& cfg, std::vector<std::string>* warnings) {
  MaskOracle o(g, v, cfg);
  auto s = o.after(prefix);
  if (!s) return TokenMask(v.size());
  auto r = o.mask(*s);
  if (warnings && r.undecided.any())
    warnings->push_back("horizon-insufficient: " + std::to_string(r.undecided.count()) +
                        " token(s) undecided at horizon " + std::to_string(cfg.horizon));
  return r.mask;
}

}  // namespace gcd::oracle
