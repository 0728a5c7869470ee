#include "gcd/decode.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace gcd {

std::vector<double> UniformScorer::score(const std::vector<TokenId>&) {
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<double> s(n_);
  for (auto& x : s) x = d(rng_);
  return s;
}

GreedyScorer::GreedyScorer(std::size_t vocab_size, std::vector<TokenId> preferred)
    : scores_(vocab_size) {
  for (std::size_t i = 0; i < vocab_size; ++i) scores_[i] = -static_cast<double>(i) - 1.0;
  for (std::size_t i = 0; i < preferred.size(); ++i) {
    auto t = static_cast<std::size_t>(preferred[i]);
    if (t < vocab_size) scores_[t] = static_cast<double>(preferred.size() - i);
  }
}

std::vector<double> GreedyScorer::score(const std::vector<TokenId>&) { return scores_; }

namespace {

TokenId pick(const std::vector<double>& scores, const TokenMask& mask, const DecodeOptions& o,
             std::mt19937_64& rng) {
  std::vector<TokenId> allowed = mask.to_ids();
  std::stable_sort(allowed.begin(), allowed.end(), [&](TokenId x, TokenId y) {
    return scores[static_cast<std::size_t>(x)] > scores[static_cast<std::size_t>(y)];
  });
  if (o.top_k > 0 && allowed.size() > o.top_k) allowed.resize(o.top_k);
  if (o.temperature <= 0.0) return allowed.front();
  double top = scores[static_cast<std::size_t>(allowed.front())];
  std::vector<double> w;
  for (auto t : allowed) w.push_back(std::exp((scores[static_cast<std::size_t>(t)] - top) / o.temperature));
  std::discrete_distribution<std::size_t> d(w.begin(), w.end());
  return allowed[d(rng)];
}

}  // namespace

DecodeResult constrained_decode(const CompiledArtifact& a, Scorer& model,
                                const std::vector<TokenId>& prompt, const DecodeOptions& opts) {
  DecodeResult r;
  r.state = init_state(a);
  std::vector<TokenId> history;
  for (auto t : prompt) {
    r.state = advance(a, r.state, t);
    history.push_back(t);
  }
  std::mt19937_64 rng(opts.seed);
  MaskCache cache;
  while (!r.state.finished && r.tokens.size() < opts.max_len) {
    TokenMask mask = compute_mask(a, r.state, &cache);
    if (!mask.any()) {
      r.dead_end = true;
      r.diagnostic = "dead end after " + std::to_string(history.size()) + " tokens: empty mask";
      break;
    }
    auto scores = model.score(history);
    TokenId t = pick(scores, mask, opts, rng);
    r.state = advance(a, r.state, t);
    history.push_back(t);
    r.tokens.push_back(t);
  }
  r.complete = r.state.finished;
  if (!r.complete && !r.dead_end)
    r.diagnostic = "stopped at max_len " + std::to_string(opts.max_len) + " without EOS";
  return r;
}

std::vector<TokenId> random_walk(const CompiledArtifact& a, std::size_t steps,
                                 std::uint64_t seed, std::vector<std::int64_t>* mask_us,
                                 std::vector<TokenMask>* masks) {
  std::mt19937_64 rng(seed);
  std::vector<TokenId> chosen;
  DecoderState s = init_state(a);
  MaskCache cache;
  for (std::size_t i = 0; i < steps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    TokenMask m = compute_mask(a, s, &cache);
    auto t1 = std::chrono::steady_clock::now();
    if (mask_us)
      mask_us->push_back(std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count());
    std::vector<TokenId> ids = m.to_ids();
    std::vector<TokenId> non_eos;
    for (auto t : ids)
      if (t != a.vocab.eos_id) non_eos.push_back(t);
    const auto& pool = non_eos.empty() ? ids : non_eos;
    TokenId t = -1;
    if (!pool.empty()) {
      std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
      t = pool[d(rng)];
      s = advance(a, s, t);
    }
    if (masks) masks->push_back(std::move(m));
    chosen.push_back(t);
    if (t < 0 || s.finished) s = init_state(a);
  }
  return chosen;
}

}  // namespace gcd
