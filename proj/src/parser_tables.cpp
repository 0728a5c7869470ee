#include "gcd/parser_tables.hpp"

#include <sstream>

namespace gcd {

ParserTables preprocess_parser(const Pda& p, const StrippedFsa& f, const SpannerTables& s,
                               const TokenLexingFst& tlf) {
  ParserTables t;
  t.num_lexer_states = tlf.num_states();
  t.num_lr_states = p.num_states();
  t.vocab_size = tlf.vocab_size;
  const auto& seqs = s.sequences.all();

  t.classes.assign(t.num_lr_states, std::vector<SeqClass>(seqs.size(), SeqClass::Dependent));
  for (std::size_t qp = 0; qp < t.num_lr_states; ++qp) {
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      auto q = static_cast<StateId>(qp);
      if (pda_accepts_prefix(p, q, {}, seqs[i]) == PrefixResult::Accepted)
        t.classes[qp][i] = SeqClass::Accepted;
      else if (!stripped_accepts(f, q, seqs[i], p.end_marker()))
        t.classes[qp][i] = SeqClass::Rejected;
    }
  }

  t.a_table.resize(t.num_lexer_states * t.num_lr_states);
  t.d_table.resize(t.num_lexer_states * t.num_lr_states);
  for (std::size_t qa = 0; qa < t.num_lexer_states; ++qa) {
    if (!tlf.reachable[qa]) continue;
    for (std::size_t qp = 0; qp < t.num_lr_states; ++qp) {
      auto idx = t.index(static_cast<StateId>(qa), static_cast<StateId>(qp));
      TokenMask m(t.vocab_size);
      for (const auto& e : s.t_inv[qa]) {
        switch (t.classes[qp][static_cast<std::size_t>(e.seq)]) {
          case SeqClass::Accepted: m.set_all(e.tokens); break;
          case SeqClass::Dependent: t.d_table[idx].push_back(e.seq); break;
          case SeqClass::Rejected: break;
        }
      }
      t.a_table[idx] = std::move(m);
    }
  }
  return t;
}

std::string dump_partition(const ParserTables& t, const SpannerTables& s, const Grammar& g) {
  std::ostringstream out;
  out << "state\tclass\tsequence\n";
  for (std::size_t qp = 0; qp < t.classes.size(); ++qp)
    for (std::size_t i = 0; i < t.classes[qp].size(); ++i) {
      const char* c = "D";
      if (t.classes[qp][i] == SeqClass::Accepted) c = "A";
      if (t.classes[qp][i] == SeqClass::Rejected) c = "R";
      std::string seq = g.sequence_to_string(s.sequences.get(static_cast<SeqId>(i)));
      out << qp << '\t' << c << '\t' << (seq.empty() ? "eps" : seq) << '\n';
    }
  return out.str();
}

}  // namespace gcd
