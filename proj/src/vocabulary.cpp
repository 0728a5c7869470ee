#include "gcd/vocabulary.hpp"

#include <map>
#include <json.hpp>

#include "gcd/error.hpp"
#include "gcd/hash.hpp"

namespace gcd {

std::string Vocabulary::display(TokenId t) const {
  if (t == eos_id) return "<EOS>";
  return escape_bytes(bytes(t));
}

std::string Vocabulary::detokenize(const std::vector<TokenId>& ids) const {
  std::string out;
  for (auto t : ids) out += bytes(t);
  return out;
}

Vocabulary load_vocabulary(std::string_view json, std::vector<std::string>* warnings) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& e) {
    throw VocabularyError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("tokens") || !doc.contains("eos_id"))
    throw VocabularyError("vocabulary must be an object with \"tokens\" and \"eos_id\"");
  if (doc.contains("version") && doc["version"] != 1)
    throw VocabularyError("unsupported vocabulary version");
  const auto& toks = doc["tokens"];
  if (!toks.is_array()) throw VocabularyError("\"tokens\" must be an array");
  if (!doc["eos_id"].is_number_integer()) throw VocabularyError("\"eos_id\" must be an integer");

  Vocabulary v;
  auto eos = doc["eos_id"].get<long long>();
  if (eos < 0 || eos >= static_cast<long long>(toks.size()))
    throw VocabularyError("eos_id " + std::to_string(eos) + " out of range");
  v.eos_id = static_cast<TokenId>(eos);
  v.tokens.reserve(toks.size());
  std::map<std::string, TokenId> seen;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    if (!toks[i].is_string()) throw VocabularyError("token " + std::to_string(i) + " is not a string");
    std::string bytes = base64_decode(toks[i].get<std::string>());
    auto id = static_cast<TokenId>(i);
    if (id == v.eos_id) {
      if (!bytes.empty()) throw VocabularyError("the EOS entry must have empty content");
    } else {
      if (bytes.empty()) throw VocabularyError("token " + std::to_string(i) + " is empty");
      auto [it, fresh] = seen.emplace(bytes, id);
      if (!fresh && warnings)
        warnings->push_back("duplicate-token: " + std::to_string(i) + " repeats " +
                            std::to_string(it->second));
    }
    v.tokens.push_back(std::move(bytes));
  }
  return v;
}

std::string save_vocabulary(const Vocabulary& v) {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["eos_id"] = v.eos_id;
  auto arr = nlohmann::json::array();
  for (const auto& t : v.tokens) arr.push_back(base64_encode(t));
  doc["tokens"] = std::move(arr);
  return doc.dump() + "\n";
}

CoverageReport check_coverage(const Vocabulary& v, const Fsa& lexer) {
  std::array<bool, 256> used{};
  for (const auto& row : lexer.next)
    for (int c = 0; c < 256; ++c)
      if (row[static_cast<std::size_t>(c)] != kNoState) used[static_cast<std::size_t>(c)] = true;
  std::array<bool, 256> single{};
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v.tokens[i].size() == 1) single[static_cast<unsigned char>(v.tokens[i][0])] = true;
  CoverageReport r;
  for (int c = 0; c < 256; ++c)
    if (used[static_cast<std::size_t>(c)] && !single[static_cast<std::size_t>(c)])
      r.missing_bytes.push_back(static_cast<std::uint8_t>(c));
  return r;
}

}  // namespace gcd
