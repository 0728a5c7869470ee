#include "gcd/lexing_fst.hpp"

namespace gcd {

LexingFst build_lexing_fst(const Fsa& a) {
  LexingFst fst;
  fst.initial = a.initial;
  fst.end_marker = a.num_terminals;
  fst.edges.resize(a.num_states());
  fst.eos.resize(a.num_states());
  fst.label = a.label;

  for (std::size_t q = 0; q < a.num_states(); ++q)
    for (int c = 0; c < 256; ++c)
      fst.edges[q][static_cast<std::size_t>(c)].target = a.next[q][static_cast<std::size_t>(c)];

  for (std::size_t q = 0; q < a.num_states(); ++q) {
    TerminalId t = a.label[q];
    if (t < 0) continue;
    for (int c = 0; c < 256; ++c) {
      auto& e = fst.edges[q][static_cast<std::size_t>(c)];
      StateId restart = a.next[static_cast<std::size_t>(a.initial)][static_cast<std::size_t>(c)];
      if (e.target == kNoState && restart != kNoState) {
        e.target = restart;
        e.emit = t;
      }
    }
    fst.eos[q] = TerminalSeq{t, fst.end_marker};
  }
  fst.eos[static_cast<std::size_t>(a.initial)] = TerminalSeq{fst.end_marker};
  return fst;
}

bool replay_lexing_fst(const LexingFst& fst, StateId from, std::string_view bytes, bool eos,
                       StateId& to, TerminalSeq& emitted) {
  StateId q = from;
  for (unsigned char c : bytes) {
    const auto& e = fst.edge(q, c);
    if (e.target == kNoState) return false;
    if (e.emit >= 0) emitted.push_back(e.emit);
    q = e.target;
  }
  if (eos) {
    const auto& out = fst.eos[static_cast<std::size_t>(q)];
    if (!out) return false;
    emitted.insert(emitted.end(), out->begin(), out->end());
    q = fst.initial;
  }
  to = q;
  return true;
}

std::string dump_lexing_fst(const LexingFst& fst, const Grammar& g) {
  std::string out;
  for (std::size_t q = 0; q < fst.num_states(); ++q) {
    for (int c = 0; c < 256; ++c) {
      const auto& e = fst.edges[q][static_cast<std::size_t>(c)];
      if (e.target == kNoState) continue;
      std::string o = e.emit < 0 ? "eps" : g.terminal_name(e.emit);
      out += std::to_string(q) + " -" + escape_byte(static_cast<std::uint8_t>(c)) + ":" + o +
             "-> " + std::to_string(e.target) + "\n";
    }
    if (fst.eos[q]) {
      std::string o;
      for (auto t : *fst.eos[q]) o += g.terminal_name(t);
      out += std::to_string(q) + " -EOS:" + o + "-> " + std::to_string(fst.initial) + "\n";
    }
  }
  return out;
}

bool reference_lex_step(LexResult& state, int symbol, const LexemeOracle& lexemes) {
  std::string& r = state.residual;
  if (symbol == kEos) {
    // (1), plus the empty-residual case the transducer's q0 EOS edge covers.
    if (r.empty()) {
      state.terminals.push_back(lexemes.end_marker());
      return true;
    }
    TerminalId t = lexemes.accepted_terminal(r);
    if (t < 0) return false;
    state.terminals.push_back(t);
    state.terminals.push_back(lexemes.end_marker());
    r.clear();
    return true;
  }
  const char c = static_cast<char>(static_cast<unsigned char>(symbol));
  r.push_back(c);
  if (lexemes.is_live_prefix(r)) return true;  // (2)
  r.pop_back();
  TerminalId t = r.empty() ? -1 : lexemes.accepted_terminal(r);
  if (t < 0) return false;  // (4)
  std::string fresh(1, c);
  if (!lexemes.is_live_prefix(fresh)) return false;  // c starts no terminal
  state.terminals.push_back(t);  // (3)
  r = std::move(fresh);
  return true;
}

std::optional<LexResult> reference_lex(std::string_view input, bool eos,
                                       const LexemeOracle& lexemes) {
  LexResult state;
  for (unsigned char c : input)
    if (!reference_lex_step(state, c, lexemes)) return std::nullopt;
  if (eos && !reference_lex_step(state, kEos, lexemes)) return std::nullopt;
  return state;
}

std::optional<LexResult> reference_lex(std::string_view input, bool eos, const Fsa& a) {
  return reference_lex(input, eos, FsaLexemes(a));
}

}  // namespace gcd
