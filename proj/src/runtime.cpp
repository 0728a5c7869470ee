#include "gcd/runtime.hpp"

#include <algorithm>
#include <chrono>

#include "gcd/lexing_fst.hpp"

namespace gcd {

Digest grammar_digest(const Grammar& g) { return sha256(render_grammar(g)); }
Digest vocab_digest(const Vocabulary& v) { return sha256(save_vocabulary(v)); }

CompiledArtifact compile_artifact(const Grammar& g, const Vocabulary& v, CompileReport* report) {
  auto t0 = std::chrono::steady_clock::now();
  CompiledArtifact a;
  a.grammar = g;
  a.vocab = v;
  a.grammar_hash = grammar_digest(g);
  a.vocab_hash = vocab_digest(v);

  LexingAutomatonReport lex_report;
  Fsa fsa = build_lexing_automaton(g.terminals, &lex_report);
  CoverageReport cov = check_coverage(v, fsa);
  LexingFst lex = build_lexing_fst(fsa);
  DetokenizingFst detok = build_detokenizing_fst(v);
  a.tlf = compose_and_determinize(lex, detok, v);

  std::vector<bool> ignored(g.terminals.size());
  for (std::size_t i = 0; i < ignored.size(); ++i) ignored[i] = g.terminals[i].ignored;
  a.spanner = build_spanner_tables(a.tlf, producible_terminals(lex), ignored);

  a.pda = build_lalr_pda(g);
  StrippedFsa stripped = strip_stack_fsa(a.pda);
  a.tables = preprocess_parser(a.pda, stripped, a.spanner, a.tlf);

  if (report) {
    report->warnings = lex_report.warnings;
    if (!cov.complete()) {
      std::string bytes;
      for (auto b : cov.missing_bytes) bytes += (bytes.empty() ? "" : " ") + escape_byte(b);
      report->warnings.push_back("coverage: no single-byte token for " + bytes +
                                 "; masks may be incomplete");
    }
    report->lexer_states = a.tlf.num_states();
    report->reachable_lexer_states =
        static_cast<std::size_t>(std::count(a.tlf.reachable.begin(), a.tlf.reachable.end(), true));
    report->token_transitions = a.tlf.num_transitions();
    report->realizable = a.spanner.num_realizable();
    report->lr_states = a.pda.num_states();
    report->a_entries = 0;
    report->d_entries = 0;
    for (const auto& m : a.tables.a_table) report->a_entries += m.count();
    for (const auto& d : a.tables.d_table) report->d_entries += d.size();
    report->offline_us = std::chrono::duration_cast<std::chrono::microseconds>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
  }
  return a;
}

DecoderState init_state(const CompiledArtifact& a) {
  DecoderState s;
  s.lexer_state = a.tlf.initial;
  s.parser_state = a.pda.start_state;
  return s;
}

std::optional<bool> MaskCache::lookup(StateId qp, SeqId seq, const std::vector<StateId>& stack) {
  auto it = entries_.find({qp, seq});
  if (it == entries_.end()) return std::nullopt;
  for (const auto& e : it->second) {
    if (e.suffix.size() > stack.size()) continue;
    if (std::equal(e.suffix.begin(), e.suffix.end(), stack.end() - static_cast<std::ptrdiff_t>(e.suffix.size()))) {
      ++hits_;
      return e.accepted;
    }
  }
  return std::nullopt;
}

void MaskCache::store(StateId qp, SeqId seq, const std::vector<StateId>& stack,
                      std::size_t inspected, bool accepted) {
  if (size_ >= capacity_) {
    entries_.clear();
    size_ = 0;
  }
  entries_[{qp, seq}].push_back(
      {std::vector<StateId>(stack.end() - static_cast<std::ptrdiff_t>(inspected), stack.end()),
       accepted});
  ++size_;
}

namespace {

bool dependent_accepted(const CompiledArtifact& a, const DecoderState& s, SeqId seq,
                        MaskCache* cache) {
  if (cache)
    if (auto hit = cache->lookup(s.parser_state, seq, s.stack)) return *hit;
  std::size_t inspected = 0;
  bool ok = pda_accepts_prefix(a.pda, s.parser_state, s.stack, a.spanner.sequences.get(seq),
                               &inspected) == PrefixResult::Accepted;
  if (cache) cache->store(s.parser_state, seq, s.stack, inspected, ok);
  return ok;
}

// Tokens in `tokens` not yet in `m`.
bool adds_anything(const TokenMask& m, const std::vector<TokenId>& tokens) {
  for (auto t : tokens)
    if (!m.test(t)) return true;
  return false;
}

TerminalSeq parser_view(const CompiledArtifact& a, const TerminalSeq& raw) {
  TerminalSeq out;
  for (auto t : raw)
    if (!a.grammar.is_ignored(t)) out.push_back(t);
  return out;
}

}  // namespace

TokenMask compute_mask(const CompiledArtifact& a, const DecoderState& s, MaskCache* cache) {
  if (s.finished) return TokenMask(a.vocab.size());
  TokenMask m = a.tables.always(s.lexer_state, s.parser_state);
  for (SeqId seq : a.tables.dependent(s.lexer_state, s.parser_state)) {
    const auto* e = a.spanner.find(s.lexer_state, seq);
    if (!e || !adds_anything(m, e->tokens)) continue;
    if (dependent_accepted(a, s, seq, cache)) m.set_all(e->tokens);
  }
  return m;
}

bool token_allowed(const CompiledArtifact& a, const DecoderState& s, TokenId t) {
  if (s.finished || t < 0 || static_cast<std::size_t>(t) >= a.vocab.size()) return false;
  auto st = a.tlf.step(s.lexer_state, t);
  if (!st) return false;
  TerminalSeq alpha = parser_view(a, a.tlf.emissions.get(st->emission));
  auto accepts = [&](const TerminalSeq& seq) {
    return pda_accepts_prefix(a.pda, s.parser_state, s.stack, seq) == PrefixResult::Accepted;
  };
  if (!alpha.empty() && alpha.back() == a.tlf.end_marker) return accepts(alpha);
  for (auto next : a.spanner.prod[static_cast<std::size_t>(st->target)]) {
    if (a.grammar.is_ignored(next)) {
      if (accepts(alpha)) return true;
      continue;
    }
    alpha.push_back(next);
    bool ok = accepts(alpha);
    alpha.pop_back();
    if (ok) return true;
  }
  return false;
}

DecoderState advance(const CompiledArtifact& a, const DecoderState& s, TokenId t) {
  if (s.finished) throw MaskedTokenError("decoding already finished");
  if (!token_allowed(a, s, t))
    throw MaskedTokenError("token " + std::to_string(t) + " is masked in the current state");
  auto st = a.tlf.step(s.lexer_state, t);
  DecoderState n = s;
  n.lexer_state = st->target;
  for (auto term : parser_view(a, a.tlf.emissions.get(st->emission))) {
    FeedResult r = lr_feed(a.pda, n.parser_state, n.stack, term);
    if (r == FeedResult::Error) throw Error("parser rejected an allowed token");
    if (r == FeedResult::Accepted) n.finished = true;
  }
  return n;
}

DecoderState replay(const CompiledArtifact& a, const std::vector<TokenId>& tokens) {
  DecoderState s = init_state(a);
  for (auto t : tokens) s = advance(a, s, t);
  return s;
}

}  // namespace gcd
