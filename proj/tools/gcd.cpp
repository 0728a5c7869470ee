// gcd: compile grammars into mask artifacts and query them.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gcd/artifact_io.hpp"
#include "gcd/decode.hpp"
#include "gcd/oracle/equivalence.hpp"
#include "gcd/runtime.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw gcd::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gcd::Grammar load_grammar(const std::string& path) {
  std::string text = read_file(path);
  try {
    return gcd::parse_grammar_spec(text);
  } catch (const gcd::GrammarError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) msg += gcd::format_diagnostic(d, path) + "\n";
    if (!msg.empty()) msg.pop_back();
    throw gcd::Error(msg);
  }
}

gcd::Vocabulary load_vocab(const std::string& path) {
  std::vector<std::string> warnings;
  auto v = gcd::load_vocabulary(read_file(path), &warnings);
  for (const auto& w : warnings) std::cerr << path << ": warning: " << w << "\n";
  return v;
}

gcd::CompiledArtifact build(const std::string& grammar, const std::string& vocab,
                            gcd::CompileReport* report) {
  auto a = gcd::compile_artifact(load_grammar(grammar), load_vocab(vocab), report);
  for (const auto& w : report->warnings) std::cerr << "warning: " << w << "\n";
  return a;
}

std::vector<gcd::TokenId> parse_ids(const std::string& s) {
  std::vector<gcd::TokenId> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || v < 0) throw CLI::ValidationError("--prefix", "bad token id '" + item + "'");
    out.push_back(static_cast<gcd::TokenId>(v));
  }
  return out;
}

std::string join(const std::vector<gcd::TokenId>& ids) {
  std::string s;
  for (std::size_t i = 0; i < ids.size(); ++i) s += (i ? " " : "") + std::to_string(ids[i]);
  return s;
}

void print_tables(const gcd::CompiledArtifact& a) {
  std::cout << gcd::dump_partition(a.tables, a.spanner, a.grammar);
  std::cout << "lexer_state\tlr_state\talways\tdependent\n";
  for (std::size_t qa = 0; qa < a.tables.num_lexer_states; ++qa) {
    if (!a.tlf.reachable[qa]) continue;
    for (std::size_t qp = 0; qp < a.tables.num_lr_states; ++qp) {
      auto sa = static_cast<gcd::StateId>(qa), sp = static_cast<gcd::StateId>(qp);
      std::string deps;
      for (auto seq : a.tables.dependent(sa, sp)) {
        if (!deps.empty()) deps += ';';
        deps += a.grammar.sequence_to_string(a.spanner.sequences.get(seq));
      }
      std::cout << qa << '\t' << qp << '\t' << join(a.tables.always(sa, sp).to_ids()) << '\t'
                << deps << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grammar-constrained decoding: compile, mask, generate, inspect"};
  app.require_subcommand(1);

  std::string grammar, vocab, out, artifact, prefix, stub = "greedy", what;
  std::uint64_t seed = 0;
  std::size_t max_len = 32, steps = 1000;
  int depth = 4, horizon = 8;
  bool report = false, all_rows = false;

  auto* compile = app.add_subcommand("compile", "Build an artifact from a grammar and vocabulary");
  compile->add_option("--grammar", grammar)->required();
  compile->add_option("--vocab", vocab)->required();
  compile->add_option("--out", out)->required();
  compile->add_flag("--report", report, "Also print the sequence partition counts");

  auto* mask = app.add_subcommand("mask", "Print allowed token ids after a prefix");
  mask->add_option("--artifact", artifact)->required();
  mask->add_option("--prefix", prefix, "Comma-separated token ids");

  auto* gen = app.add_subcommand("generate", "Constrained decoding with a stub model");
  gen->add_option("--artifact", artifact)->required();
  gen->add_option("--stub", stub)->check(CLI::IsMember({"uniform", "greedy"}));
  gen->add_option("--seed", seed);
  gen->add_option("--max-len", max_len);

  auto* inspect = app.add_subcommand("inspect", "Debug dumps");
  inspect->add_option("--artifact", artifact)->required();
  inspect->add_option("--what", what)->required()->check(CLI::IsMember({"spanner", "lr", "tables"}));

  auto* bench = app.add_subcommand("bench", "Per-token mask latency on a random walk");
  bench->add_option("--artifact", artifact)->required();
  bench->add_option("--steps", steps);
  bench->add_option("--seed", seed);

  auto* check = app.add_subcommand("oracle-check", "Compare masks with the brute-force oracle");
  check->add_option("--grammar", grammar)->required();
  check->add_option("--vocab", vocab)->required();
  check->add_option("--depth", depth)->check(CLI::NonNegativeNumber);
  check->add_option("--horizon", horizon)->check(CLI::PositiveNumber);
  check->add_flag("--all", all_rows, "Print every prefix, not only mismatches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*compile) {
      gcd::CompileReport r;
      auto a = build(grammar, vocab, &r);
      gcd::write_artifact_file(out, a);
      std::cout << "offline_us " << r.offline_us << "\n"
                << "lexer_states " << r.lexer_states << "\n"
                << "reachable_lexer_states " << r.reachable_lexer_states << "\n"
                << "token_transitions " << r.token_transitions << "\n"
                << "realizable " << r.realizable << "\n"
                << "lr_states " << r.lr_states << "\n"
                << "a_entries " << r.a_entries << "\n"
                << "d_entries " << r.d_entries << "\n";
      if (report) {
        std::size_t counts[3] = {0, 0, 0};
        for (const auto& row : a.tables.classes)
          for (auto c : row) ++counts[static_cast<int>(c)];
        std::cout << "always_accepted " << counts[0] << "\n"
                  << "always_rejected " << counts[1] << "\n"
                  << "context_dependent " << counts[2] << "\n";
      }
    } else if (*mask) {
      std::vector<gcd::TokenId> ids;
      try {
        ids = parse_ids(prefix);
      } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
      }
      auto a = gcd::read_artifact_file(artifact);
      for (auto t : ids)
        if (static_cast<std::size_t>(t) >= a.vocab.size())
          throw gcd::Error("token id " + std::to_string(t) + " out of range");
      auto s = gcd::replay(a, ids);
      std::cout << join(gcd::compute_mask(a, s).to_ids()) << "\n";
    } else if (*gen) {
      auto a = gcd::read_artifact_file(artifact);
      std::unique_ptr<gcd::Scorer> model;
      if (stub == "uniform")
        model = std::make_unique<gcd::UniformScorer>(a.vocab.size(), seed);
      else
        model = std::make_unique<gcd::GreedyScorer>(a.vocab.size(), std::vector<gcd::TokenId>{a.vocab.eos_id});
      gcd::DecodeOptions opts;
      opts.max_len = max_len;
      opts.seed = seed;
      auto r = gcd::constrained_decode(a, *model, {}, opts);
      std::cout << "tokens " << join(r.tokens) << "\n"
                << "text " << gcd::escape_bytes(a.vocab.detokenize(r.tokens)) << "\n"
                << "status " << (r.complete ? "complete" : r.dead_end ? "dead-end" : "incomplete")
                << "\n";
      if (!r.diagnostic.empty()) std::cerr << r.diagnostic << "\n";
    } else if (*inspect) {
      auto a = gcd::read_artifact_file(artifact);
      if (what == "spanner")
        std::cout << gcd::dump_spanner_csv(a.tlf, a.spanner.prod, a.grammar, a.vocab);
      else if (what == "lr")
        std::cout << gcd::dump_lr_table(a.pda, a.grammar);
      else
        print_tables(a);
    } else if (*bench) {
      auto a = gcd::read_artifact_file(artifact);
      std::vector<std::int64_t> us;
      gcd::random_walk(a, steps, seed, &us);
      std::sort(us.begin(), us.end());
      std::int64_t sum = 0;
      for (auto x : us) sum += x;
      auto at = [&](double q) {
        if (us.empty()) return std::int64_t{0};
        auto i = static_cast<std::size_t>(q * static_cast<double>(us.size() - 1) + 0.5);
        return us[i];
      };
      std::cout << "steps " << us.size() << "\n"
                << "mean_us " << (us.empty() ? 0 : sum / static_cast<std::int64_t>(us.size())) << "\n"
                << "p50_us " << at(0.50) << "\n"
                << "p99_us " << at(0.99) << "\n";
    } else if (*check) {
      gcd::CompileReport r;
      auto a = build(grammar, vocab, &r);
      gcd::oracle::OracleConfig cfg;
      cfg.horizon = horizon;
      cfg.max_prefix_tokens = depth;
      auto rep = gcd::oracle::check_equivalence(a, cfg, all_rows);
      std::cout << gcd::oracle::format_equivalence(rep, a.vocab);
      if (!rep.decided())
        std::cerr << "warning: horizon-insufficient: " << rep.undecided
                  << " prefix(es) have undecided oracle bits at horizon " << horizon << "\n";
      return rep.equivalent() ? 0 : 1;
    }
  } catch (const gcd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
