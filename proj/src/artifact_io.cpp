#include "gcd/artifact_io.hpp"

#include <cstring>
#include <map>
#include <fstream>
#include <sstream>

namespace gcd {

namespace {

enum Section : std::uint32_t {
  kMeta = 1,
  kGrammar = 2,
  kVocab = 3,
  kTokenFst = 4,
  kSpanner = 5,
  kLrTable = 6,
  kParserTables = 7,
};

constexpr std::size_t kHeader = 4 + 4 + 32;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void bytes(std::string_view s) {
    u64(s.size());
    out_.append(s);
  }
  void seq(const std::vector<std::int32_t>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (auto x : v) i32(x);
  }
  void pool(const SequencePool& p) {
    u32(static_cast<std::uint32_t>(p.size()));
    for (const auto& s : p.all()) seq(s);
  }
  void digest(const Digest& d) { out_.append(reinterpret_cast<const char*>(d.data()), d.size()); }
  std::string take() { return std::move(out_); }

 private:
  std::string out_;
};

class Reader {
 public:
  Reader(std::string_view data, std::string what) : data_(data), what_(std::move(what)) {}

  void need(std::size_t n) {
    if (data_.size() - pos_ < n) throw ArtifactError("truncated section: " + what_);
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{static_cast<std::uint8_t>(data_[pos_++])} << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{static_cast<std::uint8_t>(data_[pos_++])} << (8 * i);
    return v;
  }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  // Element counts are bounded by the bytes left, so corrupt lengths fail
  // as truncation instead of huge allocations.
  std::size_t count(std::size_t min_elem_bytes) {
    std::uint32_t n = u32();
    need(static_cast<std::size_t>(n) * min_elem_bytes);
    return n;
  }
  std::string bytes() {
    std::uint64_t n = u64();
    need(n);
    std::string s(data_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  std::vector<std::int32_t> seq() {
    std::vector<std::int32_t> v(count(4));
    for (auto& x : v) x = i32();
    return v;
  }
  SequencePool pool() {
    SequencePool p;
    auto n = count(4);
    for (std::size_t i = 0; i < n; ++i) p.intern(seq());
    if (p.size() != n) throw ArtifactError("duplicate sequence in " + what_);
    return p;
  }
  Digest digest() {
    need(32);
    Digest d;
    std::memcpy(d.data(), data_.data() + pos_, 32);
    pos_ += 32;
    return d;
  }
  void finish() {
    if (pos_ != data_.size()) throw ArtifactError("trailing bytes in section: " + what_);
  }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::string what_;
};

std::string write_vocab(const Vocabulary& v) {
  Writer w;
  w.i32(v.eos_id);
  w.u32(static_cast<std::uint32_t>(v.size()));
  for (const auto& t : v.tokens) w.bytes(t);
  return w.take();
}

Vocabulary read_vocab(Reader& r) {
  Vocabulary v;
  v.eos_id = r.i32();
  v.tokens.resize(r.count(8));
  for (auto& t : v.tokens) t = r.bytes();
  if (v.eos_id < 0 || static_cast<std::size_t>(v.eos_id) >= v.size())
    throw ArtifactError("vocabulary eos id out of range");
  return v;
}

std::string write_tlf(const TokenLexingFst& f) {
  Writer w;
  w.i32(f.initial);
  w.i32(f.end_marker);
  w.i32(f.eos_id);
  w.u64(f.vocab_size);
  w.u32(static_cast<std::uint32_t>(f.num_states()));
  for (std::size_t q = 0; q < f.num_states(); ++q) {
    w.u8(f.reachable[q] ? 1 : 0);
    w.u32(static_cast<std::uint32_t>(f.steps[q].size()));
    for (const auto& s : f.steps[q]) {
      w.i32(s.token);
      w.i32(s.target);
      w.i32(s.emission);
    }
  }
  w.pool(f.emissions);
  return w.take();
}

TokenLexingFst read_tlf(Reader& r) {
  TokenLexingFst f;
  f.initial = r.i32();
  f.end_marker = r.i32();
  f.eos_id = r.i32();
  f.vocab_size = r.u64();
  auto n = r.count(5);
  f.reachable.resize(n);
  f.steps.resize(n);
  for (std::size_t q = 0; q < n; ++q) {
    f.reachable[q] = r.u8() != 0;
    f.steps[q].resize(r.count(12));
    for (auto& s : f.steps[q]) {
      s.token = r.i32();
      s.target = r.i32();
      s.emission = r.i32();
    }
  }
  f.emissions = r.pool();
  return f;
}

std::string write_spanner(const SpannerTables& s) {
  Writer w;
  w.pool(s.sequences);
  w.u32(static_cast<std::uint32_t>(s.prod.size()));
  for (const auto& p : s.prod) w.seq(p);
  w.u32(static_cast<std::uint32_t>(s.t_inv.size()));
  for (const auto& row : s.t_inv) {
    w.u32(static_cast<std::uint32_t>(row.size()));
    for (const auto& e : row) {
      w.i32(e.seq);
      w.seq(e.tokens);
    }
  }
  return w.take();
}

SpannerTables read_spanner(Reader& r) {
  SpannerTables s;
  s.sequences = r.pool();
  s.prod.resize(r.count(4));
  for (auto& p : s.prod) p = r.seq();
  s.t_inv.resize(r.count(4));
  for (auto& row : s.t_inv) {
    row.resize(r.count(8));
    for (auto& e : row) {
      e.seq = r.i32();
      e.tokens = r.seq();
    }
  }
  return s;
}

std::string write_pda(const Pda& p) {
  Writer w;
  w.i32(p.num_terminals);
  w.i32(p.num_nonterminals);
  w.i32(p.start_state);
  w.u32(static_cast<std::uint32_t>(p.rules.size()));
  for (const auto& r : p.rules) {
    w.i32(r.lhs);
    w.i32(r.rhs_len);
  }
  w.u32(static_cast<std::uint32_t>(p.num_states()));
  for (std::size_t q = 0; q < p.num_states(); ++q) {
    for (const auto& a : p.action[q]) {
      w.u8(static_cast<std::uint8_t>(a.kind));
      w.i32(a.arg);
    }
    for (auto g : p.goto_[q]) w.i32(g);
  }
  return w.take();
}

Pda read_pda(Reader& r) {
  Pda p;
  p.num_terminals = r.i32();
  p.num_nonterminals = r.i32();
  p.start_state = r.i32();
  if (p.num_terminals < 1 || p.num_nonterminals < 0) throw ArtifactError("bad LR table shape");
  p.rules.resize(r.count(8));
  for (auto& rule : p.rules) {
    rule.lhs = r.i32();
    rule.rhs_len = r.i32();
  }
  auto n = r.count(1);
  p.action.assign(n, std::vector<Action>(static_cast<std::size_t>(p.num_terminals)));
  p.goto_.assign(n, std::vector<StateId>(static_cast<std::size_t>(p.num_nonterminals)));
  for (std::size_t q = 0; q < n; ++q) {
    for (auto& a : p.action[q]) {
      auto k = r.u8();
      if (k > static_cast<std::uint8_t>(Action::Kind::Accept)) throw ArtifactError("bad LR action");
      a.kind = static_cast<Action::Kind>(k);
      a.arg = r.i32();
    }
    for (auto& g : p.goto_[q]) g = r.i32();
  }
  return p;
}

std::string write_tables(const ParserTables& t) {
  Writer w;
  w.u64(t.num_lexer_states);
  w.u64(t.num_lr_states);
  w.u64(t.vocab_size);
  for (const auto& m : t.a_table) {
    w.u8(m.size() ? 1 : 0);
    if (m.size())
      for (auto word : m.words()) w.u64(word);
  }
  for (const auto& d : t.d_table) w.seq(d);
  w.u32(static_cast<std::uint32_t>(t.classes.size()));
  for (const auto& row : t.classes) {
    w.u32(static_cast<std::uint32_t>(row.size()));
    for (auto c : row) w.u8(static_cast<std::uint8_t>(c));
  }
  return w.take();
}

ParserTables read_tables(Reader& r) {
  ParserTables t;
  t.num_lexer_states = r.u64();
  t.num_lr_states = r.u64();
  t.vocab_size = r.u64();
  std::size_t cells = t.num_lexer_states * t.num_lr_states;
  r.need(cells);  // at least one byte per A cell
  t.a_table.resize(cells);
  for (auto& m : t.a_table) {
    if (!r.u8()) continue;
    m = TokenMask(t.vocab_size);
    for (auto& word : m.words()) word = r.u64();
  }
  t.d_table.resize(cells);
  for (auto& d : t.d_table) d = r.seq();
  t.classes.resize(r.count(4));
  for (auto& row : t.classes) {
    row.resize(r.count(1));
    for (auto& c : row) {
      auto v = r.u8();
      if (v > static_cast<std::uint8_t>(SeqClass::Dependent)) throw ArtifactError("bad sequence class");
      c = static_cast<SeqClass>(v);
    }
  }
  return t;
}

}  // namespace

std::string serialize_artifact(const CompiledArtifact& a) {
  Writer meta;
  meta.digest(a.grammar_hash);
  meta.digest(a.vocab_hash);
  std::vector<std::pair<std::uint32_t, std::string>> sections = {
      {kMeta, meta.take()},
      {kGrammar, render_grammar(a.grammar)},
      {kVocab, write_vocab(a.vocab)},
      {kTokenFst, write_tlf(a.tlf)},
      {kSpanner, write_spanner(a.spanner)},
      {kLrTable, write_pda(a.pda)},
      {kParserTables, write_tables(a.tables)},
  };
  Writer body;
  body.u32(static_cast<std::uint32_t>(sections.size()));
  std::uint64_t offset = kHeader + 4 + sections.size() * 20;
  for (const auto& [id, payload] : sections) {
    body.u32(id);
    body.u64(offset);
    body.u64(payload.size());
    offset += payload.size();
  }
  std::string rest = body.take();
  for (const auto& [id, payload] : sections) rest += payload;

  Writer head;
  head.u8('G');
  head.u8('C');
  head.u8('D');
  head.u8('A');
  head.u32(kArtifactVersion);
  head.digest(sha256(rest));
  return head.take() + rest;
}

CompiledArtifact deserialize_artifact(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != "GCDA") throw ArtifactError("bad magic");
  Reader head(bytes.substr(0, std::min(bytes.size(), kHeader)), "header");
  head.u32();
  std::uint32_t version = head.u32();
  if (version != kArtifactVersion)
    throw ArtifactError("version mismatch: file has " + std::to_string(version) + ", expected " +
                        std::to_string(kArtifactVersion));
  Digest stored = head.digest();
  std::string_view rest = bytes.substr(kHeader);
  if (sha256(rest) != stored) throw ArtifactError("hash mismatch: artifact content is corrupted");

  Reader table(rest, "section table");
  std::uint32_t n = table.u32();
  std::map<std::uint32_t, std::string_view> sections;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t id = table.u32();
    std::uint64_t off = table.u64();
    std::uint64_t len = table.u64();
    if (off > bytes.size() || len > bytes.size() - off)
      throw ArtifactError("truncated section " + std::to_string(id));
    sections[id] = bytes.substr(off, len);
  }
  auto section = [&](std::uint32_t id, const char* name) {
    auto it = sections.find(id);
    if (it == sections.end()) throw ArtifactError(std::string("missing section: ") + name);
    return Reader(it->second, name);
  };

  CompiledArtifact a;
  {
    auto r = section(kMeta, "meta");
    a.grammar_hash = r.digest();
    a.vocab_hash = r.digest();
    r.finish();
  }
  try {
    auto it = sections.find(kGrammar);
    if (it == sections.end()) throw ArtifactError("missing section: grammar");
    a.grammar = parse_grammar_spec(it->second);
  } catch (const GrammarError& e) {
    throw ArtifactError(std::string("embedded grammar does not parse: ") + e.what());
  }
  {
    auto r = section(kVocab, "vocabulary");
    a.vocab = read_vocab(r);
    r.finish();
  }
  if (grammar_digest(a.grammar) != a.grammar_hash) throw ArtifactError("grammar hash mismatch");
  if (vocab_digest(a.vocab) != a.vocab_hash) throw ArtifactError("vocabulary hash mismatch");
  {
    auto r = section(kTokenFst, "token transducer");
    a.tlf = read_tlf(r);
    r.finish();
  }
  {
    auto r = section(kSpanner, "spanner tables");
    a.spanner = read_spanner(r);
    r.finish();
  }
  {
    auto r = section(kLrTable, "LR table");
    a.pda = read_pda(r);
    r.finish();
  }
  {
    auto r = section(kParserTables, "parser tables");
    a.tables = read_tables(r);
    r.finish();
  }
  if (a.tlf.vocab_size != a.vocab.size() || a.tables.vocab_size != a.vocab.size() ||
      a.tables.num_lr_states != a.pda.num_states() ||
      a.tables.num_lexer_states != a.tlf.num_states() ||
      a.spanner.t_inv.size() != a.tlf.num_states() ||
      a.pda.num_terminals != a.grammar.end_marker() + 1)
    throw ArtifactError("artifact sections disagree on table sizes");
  return a;
}

void write_artifact_file(const std::string& path, const CompiledArtifact& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArtifactError("cannot open " + path + " for writing");
  std::string bytes = serialize_artifact(a);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ArtifactError("write failed: " + path);
}

CompiledArtifact read_artifact_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_artifact(ss.str());
}

}  // namespace gcd
