#include "testkit.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "gcd/artifact_io.hpp"
#include "gcd/fsa.hpp"
#include "gcd/lexing_fst.hpp"
#include "gcd/oracle/derivatives.hpp"
#include "gcd/oracle/earley.hpp"
#include "gcd/token_fst.hpp"

namespace gcd::testkit {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string data_path(const std::string& rel) { return std::string(GCD_DATA_DIR) + "/" + rel; }

Grammar bc_grammar() { return parse_grammar_spec(read_file(data_path("bc/grammar.gcd"))); }
Vocabulary bc_vocab() { return load_vocabulary(read_file(data_path("bc/vocab.json"))); }

const CompiledArtifact& bc_artifact() {
  static const CompiledArtifact a = compile_artifact(bc_grammar(), bc_vocab());
  return a;
}

Grammar config_grammar() { return parse_grammar_spec(read_file(data_path("config/grammar.gcd"))); }

TokenId token_id(const Vocabulary& v, std::string_view bytes) {
  if (bytes == "<EOS>") return v.eos_id;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (static_cast<TokenId>(i) != v.eos_id && v.tokens[i] == bytes) return static_cast<TokenId>(i);
  throw std::runtime_error("no token " + std::string(bytes));
}

std::vector<TokenId> token_ids(const Vocabulary& v, std::initializer_list<std::string_view> toks) {
  std::vector<TokenId> out;
  for (auto t : toks) out.push_back(token_id(v, t));
  return out;
}

TokenMask mask_of(const Vocabulary& v, std::initializer_list<std::string_view> toks) {
  auto ids = token_ids(v, toks);
  return TokenMask::from_ids(v.size(), ids);
}

void Check::fail(const std::string& what) {
  ok = false;
  if (++failures <= 3) detail += (detail.empty() ? "" : "; ") + what;
}

void Check::merge(const Check& o) {
  cases += o.cases;
  if (!o.ok) {
    ok = false;
    failures += o.failures;
    if (!o.detail.empty()) detail += (detail.empty() ? "" : "; ") + o.detail;
  }
}

std::vector<std::string> all_strings(std::string_view alphabet, int max_len) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == max_len) continue;
    for (char c : alphabet) out.push_back(out[i] + c);
  }
  return out;
}

std::vector<std::string> random_strings(std::uint64_t seed, std::string_view alphabet,
                                        std::size_t count, int max_len) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < count; ++i) {
    std::string s;
    for (int k = len(rng); k > 0; --k) s += alphabet[pick(rng)];
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::vector<TokenId>> all_token_sequences(const Vocabulary& v, int max_len) {
  std::vector<std::vector<TokenId>> out{{}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (static_cast<int>(out[i].size()) == max_len) continue;
    if (!out[i].empty() && out[i].back() == v.eos_id) continue;
    for (std::size_t t = 0; t < v.size(); ++t) {
      auto next = out[i];
      next.push_back(static_cast<TokenId>(t));
      out.push_back(std::move(next));
    }
  }
  return out;
}

namespace {

std::string show(const std::string& s) { return "\"" + escape_bytes(s) + "\""; }

StateId residual_state(const Fsa& fsa, const std::string& residual) {
  return residual.empty() ? fsa.initial : fsa.run(residual);
}

}  // namespace

Check lexing_fst_matches_reference(const Grammar& g, const std::vector<std::string>& inputs) {
  Check c;
  Fsa fsa = build_lexing_automaton(g.terminals);
  LexingFst fst = build_lexing_fst(fsa);
  oracle::DerivativeLexemes lexemes(g.terminals);
  for (const auto& in : inputs) {
    for (bool eos : {false, true}) {
      ++c.cases;
      StateId to = kNoState;
      TerminalSeq emitted;
      bool ok = replay_lexing_fst(fst, fst.initial, in, eos, to, emitted);
      auto ref = reference_lex(in, eos, lexemes);
      if (ok != ref.has_value()) {
        c.fail(show(in) + (eos ? "+EOS" : "") + ": transducer " + (ok ? "accepts" : "rejects"));
        continue;
      }
      if (!ok) continue;
      if (emitted != ref->terminals || to != residual_state(fsa, ref->residual))
        c.fail(show(in) + (eos ? "+EOS" : "") + ": emitted " + g.sequence_to_string(emitted) +
               " vs " + g.sequence_to_string(ref->terminals));
    }
  }
  return c;
}

Check token_fst_matches_reference(const Grammar& g, const Vocabulary& v,
                                  const std::vector<std::vector<TokenId>>& seqs) {
  Check c;
  Fsa fsa = build_lexing_automaton(g.terminals);
  LexingFst lex = build_lexing_fst(fsa);
  TokenLexingFst tlf = compose_and_determinize(lex, build_detokenizing_fst(v), v);
  oracle::DerivativeLexemes lexemes(g.terminals);
  for (const auto& seq : seqs) {
    ++c.cases;
    bool eos = !seq.empty() && seq.back() == v.eos_id;
    StateId q = tlf.initial;
    TerminalSeq emitted;
    bool ok = true;
    for (auto t : seq) {
      auto st = tlf.step(q, t);
      if (!st) {
        ok = false;
        break;
      }
      const auto& e = tlf.emissions.get(st->emission);
      emitted.insert(emitted.end(), e.begin(), e.end());
      q = st->target;
    }
    std::vector<TokenId> body(seq.begin(), seq.end() - (eos ? 1 : 0));
    auto ref = reference_lex(v.detokenize(body), eos, lexemes);
    std::string name;
    for (auto t : seq) name += (name.empty() ? "" : ",") + v.display(t);
    if (ok != ref.has_value()) {
      c.fail("[" + name + "]: token transducer " + (ok ? "accepts" : "rejects"));
      continue;
    }
    if (!ok) continue;
    if (emitted != ref->terminals || q != residual_state(fsa, ref->residual))
      c.fail("[" + name + "]: emitted " + g.sequence_to_string(emitted) + " vs " +
             g.sequence_to_string(ref->terminals));
  }
  return c;
}

namespace {

struct Config {
  StateId top;
  std::vector<StateId> below;
};

// Parser configurations reached by feeding random terminals from the start.
std::vector<Config> random_configs(const Pda& p, std::mt19937_64& rng, std::size_t count) {
  std::vector<Config> out;
  std::uniform_int_distribution<TerminalId> term(0, p.end_marker() - 1);
  std::uniform_int_distribution<int> len(0, 12);
  for (std::size_t i = 0; i < count; ++i) {
    Config c{p.start_state, {}};
    for (int k = len(rng), tries = 0; k > 0 && tries < 200; ++tries) {
      Config n = c;
      if (lr_feed(p, n.top, n.below, term(rng)) == FeedResult::Shifted) {
        c = std::move(n);
        --k;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

TerminalSeq random_alpha(const Pda& p, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<TerminalId> term(0, p.end_marker() - 1);
  TerminalSeq a;
  for (int k = std::uniform_int_distribution<int>(1, max_len)(rng); k > 0; --k) a.push_back(term(rng));
  if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) a.push_back(p.end_marker());
  return a;
}

std::vector<StateId> random_states(const Pda& p, std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<StateId> st(0, static_cast<StateId>(p.num_states()) - 1);
  std::vector<StateId> s;
  for (int k = std::uniform_int_distribution<int>(1, max_len)(rng); k > 0; --k) s.push_back(st(rng));
  return s;
}

}  // namespace

Check stack_invariance(const Pda& p, std::uint64_t seed, std::size_t samples, std::size_t paddings) {
  Check c;
  std::mt19937_64 rng(seed);
  auto configs = random_configs(p, rng, 256);
  std::size_t accepted = 0;
  for (std::size_t attempt = 0; accepted < samples && attempt < samples * 500; ++attempt) {
    const Config& cfg = configs[attempt % configs.size()];
    auto keep = std::uniform_int_distribution<std::size_t>(0, cfg.below.size())(rng);
    std::vector<StateId> gamma(cfg.below.end() - static_cast<std::ptrdiff_t>(keep), cfg.below.end());
    TerminalSeq alpha = random_alpha(p, rng, 4);
    if (pda_accepts_prefix(p, cfg.top, gamma, alpha) != PrefixResult::Accepted) continue;
    ++accepted;
    for (std::size_t k = 0; k < paddings; ++k) {
      ++c.cases;
      auto padded = random_states(p, rng, 5);
      padded.insert(padded.end(), gamma.begin(), gamma.end());
      if (pda_accepts_prefix(p, cfg.top, padded, alpha) != PrefixResult::Accepted)
        c.fail("padding flipped acceptance from state " + std::to_string(cfg.top));
    }
  }
  if (accepted < samples) c.fail("only " + std::to_string(accepted) + " accepted triples sampled");
  return c;
}

Check overapproximation(const Pda& p, std::uint64_t seed, std::size_t samples,
                        std::size_t stacks_per_sample) {
  Check c;
  std::mt19937_64 rng(seed);
  StrippedFsa f = strip_stack_fsa(p);
  auto configs = random_configs(p, rng, 512);
  std::map<StateId, std::vector<const Config*>> by_top;
  for (const auto& cfg : configs) by_top[cfg.top].push_back(&cfg);
  std::uniform_int_distribution<StateId> st(0, static_cast<StateId>(p.num_states()) - 1);
  std::size_t rejected = 0;
  for (std::size_t attempt = 0; rejected < samples && attempt < samples * 500; ++attempt) {
    StateId q = st(rng);
    TerminalSeq alpha = random_alpha(p, rng, 5);
    if (stripped_accepts(f, q, alpha, p.end_marker())) continue;
    ++rejected;
    const auto& real = by_top[q];
    for (std::size_t k = 0; k < stacks_per_sample; ++k) {
      ++c.cases;
      std::vector<StateId> stack = (k % 2 == 0 && !real.empty())
                                       ? real[k / 2 % real.size()]->below
                                       : random_states(p, rng, 8);
      if (pda_accepts_prefix(p, q, stack, alpha) == PrefixResult::Accepted)
        c.fail("PDA accepts a sequence the stripped automaton rejects from state " +
               std::to_string(q));
    }
  }
  if (rejected < samples) c.fail("only " + std::to_string(rejected) + " rejected sequences sampled");
  return c;
}

Check partition_law(const CompiledArtifact& a) {
  Check c;
  StrippedFsa f = strip_stack_fsa(a.pda);
  const auto& seqs = a.spanner.sequences.all();
  const auto& t = a.tables;
  for (std::size_t qp = 0; qp < a.pda.num_states(); ++qp) {
    std::size_t counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      ++c.cases;
      auto q = static_cast<StateId>(qp);
      bool in_a = pda_accepts_prefix(a.pda, q, {}, seqs[i]) == PrefixResult::Accepted;
      bool in_r = !in_a && !stripped_accepts(f, q, seqs[i], a.pda.end_marker());
      SeqClass want = in_a ? SeqClass::Accepted : in_r ? SeqClass::Rejected : SeqClass::Dependent;
      if (t.classes[qp][i] != want)
        c.fail("state " + std::to_string(qp) + " sequence " + std::to_string(i) + " misclassified");
      ++counts[static_cast<int>(t.classes[qp][i])];
    }
    if (counts[0] + counts[1] + counts[2] != seqs.size())
      c.fail("state " + std::to_string(qp) + ": classes do not cover the realizable set");
  }
  for (std::size_t qa = 0; qa < t.num_lexer_states; ++qa) {
    if (!a.tlf.reachable[qa]) continue;
    for (std::size_t qp = 0; qp < t.num_lr_states; ++qp) {
      auto sa = static_cast<StateId>(qa), sp = static_cast<StateId>(qp);
      TokenMask want(a.vocab.size());
      for (const auto& e : a.spanner.t_inv[qa])
        if (t.classes[qp][static_cast<std::size_t>(e.seq)] == SeqClass::Accepted) want.set_all(e.tokens);
      if (!(want == t.always(sa, sp))) c.fail("A row mismatch");
      for (SeqId seq : t.dependent(sa, sp)) {
        const auto* e = a.spanner.find(sa, seq);
        if (!e || e->tokens.empty()) c.fail("D entry with empty t_inv");
        if (!stripped_accepts(f, sp, a.spanner.sequences.get(seq), a.pda.end_marker()))
          c.fail("D entry rejected by the stripped automaton");
      }
    }
  }
  return c;
}

FinishingScorer::FinishingScorer(const CompiledArtifact& a, std::uint64_t seed,
                                 std::size_t random_steps)
    : a_(a), random_(a.vocab.size(), seed), random_steps_(random_steps) {}

std::vector<double> FinishingScorer::score(const std::vector<TokenId>& history) {
  std::vector<double> s = random_.score(history);
  if (history.size() < random_steps_) return s;
  // Breadth-first search for the nearest state where EOS is allowed.
  DecoderState start = replay(a_, history);
  struct Node {
    DecoderState state;
    TokenId first;
  };
  std::deque<Node> queue{{start, -1}};
  std::set<std::tuple<StateId, StateId, std::vector<StateId>>> seen;
  seen.insert({start.lexer_state, start.parser_state, start.stack});
  while (!queue.empty() && seen.size() < 50000) {
    Node n = std::move(queue.front());
    queue.pop_front();
    if (token_allowed(a_, n.state, a_.vocab.eos_id)) {
      s[static_cast<std::size_t>(n.first < 0 ? a_.vocab.eos_id : n.first)] = 1e9;
      return s;
    }
    for (TokenId t : compute_mask(a_, n.state).to_ids()) {
      DecoderState next = advance(a_, n.state, t);
      if (seen.insert({next.lexer_state, next.parser_state, next.stack}).second)
        queue.push_back({std::move(next), n.first < 0 ? t : n.first});
    }
  }
  return s;
}

bool in_lex_language(const Grammar& g, std::string_view text) {
  oracle::DerivativeLexemes lexemes(g.terminals);
  auto lexed = reference_lex(text, true, lexemes);
  if (!lexed || !lexed->residual.empty()) return false;
  TerminalSeq seq;
  for (auto t : lexed->terminals)
    if (!g.is_ignored(t)) seq.push_back(t);
  return !seq.empty() && seq.back() == g.end_marker() && oracle::prefix_membership(g, seq);
}

Check end_to_end(const CompiledArtifact& a, std::uint64_t seed, std::size_t runs,
                 std::size_t max_len) {
  Check c;
  for (std::size_t i = 0; i < runs; ++i) {
    ++c.cases;
    FinishingScorer model(a, seed + i, i % 8);
    DecodeOptions opts;
    opts.max_len = max_len;
    auto r = constrained_decode(a, model, {}, opts);
    std::string text = a.vocab.detokenize(r.tokens);
    if (!r.complete)
      c.fail("run " + std::to_string(i) + " did not finish: " + r.diagnostic);
    else if (r.tokens.empty() || r.tokens.back() != a.vocab.eos_id)
      c.fail("run " + std::to_string(i) + " finished without EOS");
    else if (!in_lex_language(a.grammar, a.vocab.detokenize({r.tokens.begin(), r.tokens.end() - 1})))
      c.fail("run " + std::to_string(i) + " produced " + show(text) + " outside the language");
  }
  return c;
}

Check roundtrip_walk(const CompiledArtifact& a, std::size_t steps, std::uint64_t seed) {
  Check c;
  CompiledArtifact b = deserialize_artifact(serialize_artifact(a));
  std::vector<TokenMask> ma, mb;
  auto ta = random_walk(a, steps, seed, nullptr, &ma);
  auto tb = random_walk(b, steps, seed, nullptr, &mb);
  for (std::size_t i = 0; i < steps; ++i) {
    ++c.cases;
    if (!(ma[i] == mb[i]) || ta[i] != tb[i]) c.fail("step " + std::to_string(i) + " differs");
  }
  return c;
}

}  // namespace gcd::testkit
