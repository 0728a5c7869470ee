#include "gcd/oracle/equivalence.hpp"

#include <deque>
#include <set>
#include <sstream>
#include <tuple>

namespace gcd::oracle {

EquivalenceReport check_equivalence(const CompiledArtifact& a, const OracleConfig& cfg,
                                    bool keep_all) {
  EquivalenceReport report;
  MaskOracle oracle(a.grammar, a.vocab, cfg);

  struct Node {
    std::vector<TokenId> prefix;
    MaskOracle::State os;
    DecoderState es;
  };
  std::set<std::pair<MaskOracle::State, std::tuple<StateId, StateId, std::vector<StateId>>>> visited;

  std::deque<Node> queue;
  queue.push_back({{}, oracle.initial(), init_state(a)});
  visited.insert({queue.front().os, {queue.front().es.lexer_state, queue.front().es.parser_state,
                                     queue.front().es.stack}});
  MaskCache cache;
  while (!queue.empty()) {
    Node node = std::move(queue.front());
    queue.pop_front();
    ++report.prefixes;

    EquivalenceRow row;
    row.prefix = node.prefix;
    row.engine = compute_mask(a, node.es, &cache);
    auto res = oracle.mask(node.os);
    row.oracle = std::move(res.mask);
    row.undecided = std::move(res.undecided);
    if (row.undecided.any()) ++report.undecided;
    bool diff = row.differs();
    if (diff) ++report.diffs;

    if (static_cast<int>(node.prefix.size()) < cfg.max_prefix_tokens) {
      TokenMask both = row.engine;
      for (std::size_t w = 0; w < both.words().size(); ++w) both.words()[w] &= row.oracle.words()[w];
      for (TokenId t : both.to_ids()) {
        if (t == a.vocab.eos_id) continue;
        Node child{node.prefix, oracle.feed(node.os, a.vocab.bytes(t)), advance(a, node.es, t)};
        child.prefix.push_back(t);
        if (!visited.insert({child.os, {child.es.lexer_state, child.es.parser_state, child.es.stack}}).second)
          continue;
        queue.push_back(std::move(child));
      }
    }
    if (keep_all || diff) report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

std::string ids(const std::vector<TokenId>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s.empty() ? "-" : s;
}

}  // namespace

std::string format_equivalence(const EquivalenceReport& r, const Vocabulary&) {
  std::ostringstream out;
  out << "prefix\tengine\toracle\tdiff\n";
  for (const auto& row : r.rows) {
    std::vector<TokenId> diff;
    for (std::size_t t = 0; t < row.engine.size(); ++t) {
      auto id = static_cast<TokenId>(t);
      if (row.engine.test(id) != row.oracle.test(id)) diff.push_back(id);
    }
    out << ids(row.prefix) << '\t' << ids(row.engine.to_ids()) << '\t' << ids(row.oracle.to_ids())
        << '\t' << ids(diff) << (row.undecided.any() ? "\tundecided" : "") << '\n';
  }
  out << "summary\tprefixes=" << r.prefixes << "\tdiffs=" << r.diffs
      << "\tundecided=" << r.undecided << '\n';
  return out.str();
}

}  // namespace gcd::oracle
