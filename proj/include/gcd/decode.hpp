#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gcd/runtime.hpp"

namespace gcd {

/// Next-token scorer. Returns one score per vocabulary entry given the
/// history so far.
class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::vector<double> score(const std::vector<TokenId>& history) = 0;
};

/// Independent uniform random scores from a seeded generator.
class UniformScorer final : public Scorer {
 public:
  UniformScorer(std::size_t vocab_size, std::uint64_t seed) : n_(vocab_size), rng_(seed) {}
  std::vector<double> score(const std::vector<TokenId>& history) override;

 private:
  std::size_t n_;
  std::mt19937_64 rng_;
};

/// Fixed preference: earlier entries in `preferred` score higher, all other
/// tokens score lower still, by ascending id.
class GreedyScorer final : public Scorer {
 public:
  GreedyScorer(std::size_t vocab_size, std::vector<TokenId> preferred);
  std::vector<double> score(const std::vector<TokenId>& history) override;

 private:
  std::vector<double> scores_;
};

struct DecodeOptions {
  std::size_t max_len = 64;
  double temperature = 0.0;  // 0 = argmax
  std::size_t top_k = 0;     // 0 = no limit
  std::uint64_t seed = 0;
};

struct DecodeResult {
  std::vector<TokenId> tokens;  // generated tokens, prompt excluded
  DecoderState state;
  bool complete = false;  // ended with EOS
  bool dead_end = false;  // empty mask before completion
  std::string diagnostic;
};

/// Mask, score, pick, advance until EOS, max_len or a dead end.
/// Throws MaskedTokenError if the prompt itself is not mask-valid.
DecodeResult constrained_decode(const CompiledArtifact& a, Scorer& model,
                                const std::vector<TokenId>& prompt,
                                const DecodeOptions& opts = {});

/// Random constrained walk for benchmarking. Each step computes the mask
/// (timed when `mask_us` is non-null), then picks an allowed token
/// uniformly, preferring non-EOS; the state restarts after EOS or a dead
/// end. Returns the chosen token per step; `masks` receives the masks.
std::vector<TokenId> random_walk(const CompiledArtifact& a, std::size_t steps,
                                 std::uint64_t seed, std::vector<std::int64_t>* mask_us = nullptr,
                                 std::vector<TokenMask>* masks = nullptr);

}  // namespace gcd
