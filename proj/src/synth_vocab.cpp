#include "gcd/synth_vocab.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace gcd {

namespace {

const std::vector<std::string> kWords = {
    "true", "false", "null", "let", "include", "name", "value", "id", "type", "config",
    "port", "host", "user", "path", "data", "items", "list", "max", "min", "size",
    "enabled", "version", "key", "server", "client", "url", "timeout", "mode", "level", "tags"};
const std::vector<std::string> kPunct = {"{", "}", "[", "]", "(", ")", ":", ",", "=", ";", "+", "\"", "#"};
const std::vector<std::string> kSpace = {" ", "  ", "    ", "\n", "\n  ", "\n    ", "\t", "\r\n"};

}  // namespace

Vocabulary synthetic_vocabulary(std::size_t size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  auto chance = [&](int pct) { return std::uniform_int_distribution<int>(0, 99)(rng) < pct; };
  auto digits = [&](int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += static_cast<char>('0' + std::uniform_int_distribution<int>(0, 9)(rng));
    return s;
  };

  std::vector<std::string> tokens;
  std::set<std::string> seen;
  auto add = [&](const std::string& t) {
    if (!t.empty() && tokens.size() + 1 < size && seen.insert(t).second) tokens.push_back(t);
  };
  add("\t");
  add("\n");
  add("\r");
  for (int c = 0x20; c < 0x7f; ++c) add(std::string(1, static_cast<char>(c)));
  for (const auto& w : kWords) {
    add(w);
    add(" " + w);
    add("\"" + w + "\"");
    add("\"" + w + "\":");
  }
  for (const auto& s : kSpace) add(s);

  while (tokens.size() + 1 < size) {
    std::string t;
    switch (std::uniform_int_distribution<int>(0, 7)(rng)) {
      case 0: {  // identifier fragment
        std::string w = pick(kWords);
        auto a = std::uniform_int_distribution<std::size_t>(0, w.size() - 1)(rng);
        auto b = std::uniform_int_distribution<std::size_t>(a + 1, w.size())(rng);
        t = w.substr(a, b - a);
        if (chance(30)) t += "_" + pick(kWords).substr(0, 3);
        if (chance(20)) t += digits(1);
        if (chance(30)) t = " " + t;
        break;
      }
      case 1:  // number fragment
        t = (chance(20) ? "-" : "") + digits(std::uniform_int_distribution<int>(1, 4)(rng));
        if (chance(30)) t += "." + digits(2);
        if (chance(10)) t += "e" + digits(1);
        break;
      case 2:  // string piece, possibly with an escape
        t = (chance(50) ? "\"" : "") + pick(kWords).substr(0, 4);
        if (chance(20)) t += "\\n";
        if (chance(40)) t += "\"";
        break;
      case 3:  // punctuation run across lexemes
        for (int i = std::uniform_int_distribution<int>(2, 3)(rng); i > 0; --i)
          t += chance(25) ? pick(kSpace).substr(0, 1) : pick(kPunct);
        break;
      case 4:  // key with separator
        t = "\"" + pick(kWords) + "\"" + (chance(50) ? ": " : ":");
        break;
      case 5:  // value then delimiter
        t = pick({"true", "false", "null", digits(1), "\"\""}) + pick({",", ", ", "}", "]", ";", ",\n"});
        break;
      case 6:  // comment fragment
        t = "#" + (chance(50) ? " " + pick(kWords) : std::string());
        break;
      default:  // word with space on either side
        t = (chance(50) ? " " : "") + pick(kWords) + pick({" ", " =", "(", ".", ""});
        break;
    }
    add(t);
  }
  Vocabulary v;
  v.tokens = std::move(tokens);
  v.eos_id = static_cast<TokenId>(v.tokens.size());
  v.tokens.emplace_back();
  return v;
}

}  // namespace gcd
