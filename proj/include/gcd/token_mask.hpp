#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gcd/types.hpp"

namespace gcd {

/// Fixed-length bit vector over the vocabulary.
class TokenMask {
 public:
  TokenMask() = default;
  explicit TokenMask(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool test(TokenId t) const {
    auto i = static_cast<std::size_t>(t);
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(TokenId t) {
    auto i = static_cast<std::size_t>(t);
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void reset(TokenId t) {
    auto i = static_cast<std::size_t>(t);
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void set_all(std::span<const TokenId> ids) {
    for (TokenId t : ids) set(t);
  }

  TokenMask& operator|=(const TokenMask& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }

  std::vector<TokenId> to_ids() const {
    std::vector<TokenId> out;
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        int b = std::countr_zero(w);
        out.push_back(static_cast<TokenId>(wi * 64 + static_cast<std::size_t>(b)));
        w &= w - 1;
      }
    }
    return out;
  }

  static TokenMask from_ids(std::size_t size, std::span<const TokenId> ids) {
    TokenMask m(size);
    m.set_all(ids);
    return m;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

  bool operator==(const TokenMask&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace gcd
