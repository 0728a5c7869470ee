#pragma once

#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcd/grammar.hpp"
#include "gcd/oracle/derivatives.hpp"
#include "gcd/oracle/earley.hpp"
#include "gcd/token_mask.hpp"
#include "gcd/vocabulary.hpp"

namespace gcd::oracle {

/// The oracle is exact only when every viable prefix it meets extends to a
/// sentence within `horizon` bytes; otherwise it reports undecided bits.
struct OracleConfig {
  int horizon = 8;
  int max_prefix_tokens = 4;
  std::uint64_t seed = 0;
};

/// Ground-truth masks by byte-level search over the reference lexer and an
/// Earley recognizer.
class MaskOracle {
 public:
  /// Earley column plus the unlexed residual; `dead` once no completion
  /// can exist.
  struct State {
    std::int32_t column = 0;
    std::string residual;
    bool dead = false;
    auto operator<=>(const State&) const = default;
  };

  enum class Outcome { Found, Exhausted, Cut };

  struct Result {
    TokenMask mask;
    TokenMask undecided;  // bits the horizon could not settle
  };

  MaskOracle(const Grammar& g, const Vocabulary& v, OracleConfig cfg = {});

  State initial() const { return State{earley_.initial(), {}, false}; }
  State feed(const State& s, std::string_view bytes);
  /// Whether `s` followed by EOS is a sentence.
  bool eos_accepts(const State& s);
  /// Is there u with |u| <= budget such that s·u·EOS is a sentence?
  Outcome completable(const State& s, int budget);

  Result mask(const State& s);
  /// State after the detokenized prefix; nullopt if it is not viable.
  std::optional<State> after(const std::vector<TokenId>& prefix);

  const OracleConfig& config() const { return cfg_; }

 private:
  struct Memo {
    bool exhausted = false;
    int found_at = INT_MAX;
    int cut_at = -1;
  };

  std::int32_t feed_terminal(std::int32_t column, TerminalId t);

  const Grammar& g_;
  const Vocabulary& v_;
  OracleConfig cfg_;
  DerivativeLexemes lexemes_;
  Earley earley_;
  std::vector<std::uint8_t> byte_reps_;
  std::map<std::pair<std::int32_t, std::string>, Memo> memo_;
};

/// Bit t set iff prefix·t (then EOS when t is EOS) can still be completed
/// to a sentence within the horizon. `warnings` receives a
/// horizon-insufficient note when some bit could not be decided.
TokenMask oracle_mask(const Grammar& g, const Vocabulary& v, const std::vector<TokenId>& prefix,
                      const OracleConfig& cfg = {}, std::vector<std::string>* warnings = nullptr);

}  // namespace gcd::oracle
