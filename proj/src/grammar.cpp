#include "gcd/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace gcd {

std::string format_diagnostic(const Diagnostic& d, const std::string& file) {
  return file + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + " " + d.code +
         " " + d.message;
}

namespace {

std::string join_messages(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "; ";
    out += std::to_string(d.line) + ":" + std::to_string(d.column) + " " + d.code + " " +
           d.message;
  }
  return out;
}

}  // namespace

GrammarError::GrammarError(std::vector<Diagnostic> diagnostics)
    : Error(join_messages(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::optional<TerminalId> Grammar::find_terminal(std::string_view name) const {
  for (std::size_t i = 0; i < terminals.size(); ++i)
    if (terminals[i].name == name) return static_cast<TerminalId>(i);
  return std::nullopt;
}

std::optional<std::int32_t> Grammar::find_nonterminal(std::string_view name) const {
  for (std::size_t i = 0; i < nonterminals.size(); ++i)
    if (nonterminals[i] == name) return static_cast<std::int32_t>(i);
  return std::nullopt;
}

const std::string& Grammar::terminal_name(TerminalId t) const {
  static const std::string kEnd = "$";
  if (t == end_marker()) return kEnd;
  return terminals.at(static_cast<std::size_t>(t)).name;
}

std::string Grammar::sequence_to_string(const TerminalSeq& seq) const {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += terminal_name(seq[i]);
  }
  return out;
}

namespace {

struct Tok {
  enum class Kind { Ident, Colon, Bar, Semi, Regex, Directive, End } kind;
  std::string text;
  SourceLoc loc;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Tok next() {
    skip_space_and_comments();
    SourceLoc loc{line_, col_};
    if (pos_ >= text_.size()) return {Tok::Kind::End, "", loc};
    char c = text_[pos_];
    if (c == ':') return single(Tok::Kind::Colon, loc);
    if (c == '|') return single(Tok::Kind::Bar, loc);
    if (c == ';') return single(Tok::Kind::Semi, loc);
    if (c == '/') return regex(loc);
    if (c == '%') {
      advance();
      std::string word = ident_chars();
      return {Tok::Kind::Directive, word, loc};
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      if (c == '$') {
        advance();
        return {Tok::Kind::Ident, "$", loc};
      }
      return {Tok::Kind::Ident, ident_chars(), loc};
    }
    throw GrammarError({{loc.line, loc.column, "syntax-error",
                         std::string("unexpected character '") + c + "'"}});
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Tok single(Tok::Kind k, SourceLoc loc) {
    std::string t(1, text_[pos_]);
    advance();
    return {k, t, loc};
  }

  std::string ident_chars() {
    std::string out;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      out += text_[pos_];
      advance();
    }
    return out;
  }

  Tok regex(SourceLoc loc) {
    advance();  // opening slash
    std::string body;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n')
        throw GrammarError({{loc.line, loc.column, "syntax-error", "unterminated regex"}});
      char c = text_[pos_];
      if (c == '/') {
        advance();
        break;
      }
      if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '\n') {
        body += c;
        advance();
        c = text_[pos_];
      }
      body += c;
      advance();
    }
    return {Tok::Kind::Regex, body, loc};
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : lexer_(text) { tok_ = lexer_.next(); }

  Grammar parse() {
    while (tok_.kind != Tok::Kind::End) {
      if (tok_.kind == Tok::Kind::Directive)
        directive();
      else
        declaration();
    }
    resolve();
    return std::move(g_);
  }

 private:
  [[noreturn]] void syntax(const std::string& msg) {
    throw GrammarError({{tok_.loc.line, tok_.loc.column, "syntax-error", msg}});
  }

  void shift() { tok_ = lexer_.next(); }

  Tok expect(Tok::Kind k, const char* what) {
    if (tok_.kind != k) syntax(std::string("expected ") + what);
    Tok t = tok_;
    shift();
    return t;
  }

  void directive() {
    if (tok_.text != "ignore") syntax("unknown directive %" + tok_.text);
    shift();
    if (tok_.kind != Tok::Kind::Ident) syntax("expected terminal name after %ignore");
    while (tok_.kind == Tok::Kind::Ident) {
      ignores_.push_back(tok_);
      shift();
    }
    expect(Tok::Kind::Semi, "';'");
  }

  void declaration() {
    Tok name = expect(Tok::Kind::Ident, "a declaration name");
    expect(Tok::Kind::Colon, "':'");
    if (tok_.kind == Tok::Kind::Regex) {
      Tok re = tok_;
      shift();
      expect(Tok::Kind::Semi, "';'");
      TerminalDef def;
      def.name = name.text;
      def.priority = static_cast<int>(g_.terminals.size());
      def.loc = name.loc;
      try {
        def.pattern = parse_regex(re.text);
      } catch (const RegexError& e) {
        throw GrammarError({{re.loc.line, re.loc.column + 1 + static_cast<int>(e.offset()),
                             "syntax-error", std::string("bad regex: ") + e.what()}});
      }
      g_.terminals.push_back(std::move(def));
      return;
    }
    auto lhs = static_cast<std::int32_t>(g_.nonterminals.size());
    g_.nonterminals.push_back(name.text);
    g_.nonterminal_locs.push_back(name.loc);
    Rule rule;
    rule.lhs = lhs;
    rule.loc = name.loc;
    while (true) {
      if (tok_.kind == Tok::Kind::Ident) {
        rule.rhs.push_back(Symbol{Symbol::Kind::Unresolved, -1, tok_.text});
        shift();
      } else if (tok_.kind == Tok::Kind::Bar) {
        g_.rules.push_back(rule);
        rule.rhs.clear();
        rule.loc = tok_.loc;
        shift();
      } else if (tok_.kind == Tok::Kind::Semi) {
        g_.rules.push_back(rule);
        shift();
        return;
      } else {
        syntax("expected symbol, '|' or ';'");
      }
    }
  }

  void resolve() {
    std::vector<Diagnostic> diags;
    for (auto& r : g_.rules) {
      for (auto& s : r.rhs) {
        if (auto t = g_.find_terminal(s.name)) {
          s.kind = Symbol::Kind::Terminal;
          s.index = *t;
        } else if (auto n = g_.find_nonterminal(s.name)) {
          s.kind = Symbol::Kind::Nonterminal;
          s.index = *n;
        }
      }
    }
    for (const auto& ig : ignores_) {
      auto t = g_.find_terminal(ig.text);
      if (!t) {
        diags.push_back({ig.loc.line, ig.loc.column, "undefined-symbol",
                         "%ignore of undeclared terminal \"" + ig.text + "\""});
        continue;
      }
      g_.terminals[static_cast<std::size_t>(*t)].ignored = true;
    }
    if (!diags.empty()) throw GrammarError(std::move(diags));
    g_.start = 0;
  }

  Lexer lexer_;
  Tok tok_;
  Grammar g_;
  std::vector<Tok> ignores_;
};

bool valid_terminal_name(const std::string& s) {
  if (s.empty() || !std::isupper(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isupper(static_cast<unsigned char>(c)) ||
           std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

bool valid_nonterminal_name(const std::string& s) {
  if (s.empty() || !(std::islower(static_cast<unsigned char>(s[0])) || s[0] == '_'))
    return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) ||
           std::isdigit(static_cast<unsigned char>(c)) || c == '_';
  });
}

}  // namespace

Grammar parse_grammar_spec(std::string_view text) {
  Grammar g = SpecParser(text).parse();
  auto diags = validate_grammar(g);
  if (!diags.empty()) throw GrammarError(std::move(diags));
  return g;
}

std::vector<Diagnostic> validate_grammar(const Grammar& g) {
  std::vector<Diagnostic> out;
  auto add = [&](SourceLoc loc, const char* code, std::string msg) {
    out.push_back({loc.line, loc.column, code, std::move(msg)});
  };
  auto nt_loc = [&](std::size_t i) {
    return i < g.nonterminal_locs.size() ? g.nonterminal_locs[i] : SourceLoc{};
  };

  std::set<std::string> seen;
  for (const auto& t : g.terminals) {
    if (!valid_terminal_name(t.name))
      add(t.loc, "bad-terminal-name", "terminal name \"" + t.name + "\" must match [A-Z][A-Z0-9_]*");
    if (!seen.insert(t.name).second)
      add(t.loc, "duplicate-terminal", "terminal \"" + t.name + "\" declared twice");
    if (regex_nullable(t.pattern))
      add(t.loc, "nullable-terminal", "terminal \"" + t.name + "\" matches the empty string");
  }
  std::set<std::string> seen_nt;
  for (std::size_t i = 0; i < g.nonterminals.size(); ++i) {
    const auto& n = g.nonterminals[i];
    if (!valid_nonterminal_name(n))
      add(nt_loc(i), "bad-nonterminal-name", "nonterminal name \"" + n + "\" must be lower case");
    if (seen.count(n) || !seen_nt.insert(n).second)
      add(nt_loc(i), "duplicate-nonterminal", "\"" + n + "\" defined more than once");
  }

  const auto nt_count = static_cast<std::int32_t>(g.nonterminals.size());
  const auto t_count = static_cast<std::int32_t>(g.terminals.size());
  if (g.start < 0 || g.start >= nt_count) {
    add({}, "bad-start", "start symbol is not a declared nonterminal");
    return out;
  }

  std::set<std::string> reported;
  for (const auto& r : g.rules) {
    for (const auto& s : r.rhs) {
      if (s.name == "$") {
        add(r.loc, "end-marker-in-rule", "`$` is appended implicitly and may not appear in rules");
        continue;
      }
      bool ok = (s.kind == Symbol::Kind::Terminal && s.index >= 0 && s.index < t_count) ||
                (s.kind == Symbol::Kind::Nonterminal && s.index >= 0 && s.index < nt_count);
      if (!ok) {
        if (reported.insert(s.name).second)
          add(r.loc, "undefined-symbol", "\"" + s.name + "\"");
        continue;
      }
      if (s.is_terminal() && g.terminals[static_cast<std::size_t>(s.index)].ignored)
        add(r.loc, "ignored-in-rule", "ignored terminal \"" + s.name + "\" used in a rule");
    }
  }

  // Productivity fixpoint. Unresolved symbols count as productive so that one
  // typo does not cascade into unrelated diagnostics.
  std::vector<bool> productive(static_cast<std::size_t>(nt_count), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : g.rules) {
      if (productive[static_cast<std::size_t>(r.lhs)]) continue;
      bool all = std::all_of(r.rhs.begin(), r.rhs.end(), [&](const Symbol& s) {
        return !s.is_nonterminal() || s.index < 0 || s.index >= nt_count ||
               productive[static_cast<std::size_t>(s.index)];
      });
      if (all) {
        productive[static_cast<std::size_t>(r.lhs)] = true;
        changed = true;
      }
    }
  }
  for (std::int32_t n = 0; n < nt_count; ++n)
    if (!productive[static_cast<std::size_t>(n)])
      add(nt_loc(static_cast<std::size_t>(n)), "unproductive",
          "\"" + g.nonterminals[static_cast<std::size_t>(n)] + "\" derives no terminal string");

  std::vector<bool> reachable(static_cast<std::size_t>(nt_count), false);
  std::vector<std::int32_t> work{g.start};
  reachable[static_cast<std::size_t>(g.start)] = true;
  while (!work.empty()) {
    auto n = work.back();
    work.pop_back();
    for (const auto& r : g.rules) {
      if (r.lhs != n) continue;
      for (const auto& s : r.rhs) {
        if (s.is_nonterminal() && s.index >= 0 && s.index < nt_count &&
            !reachable[static_cast<std::size_t>(s.index)]) {
          reachable[static_cast<std::size_t>(s.index)] = true;
          work.push_back(s.index);
        }
      }
    }
  }
  for (std::int32_t n = 0; n < nt_count; ++n)
    if (!reachable[static_cast<std::size_t>(n)])
      add(nt_loc(static_cast<std::size_t>(n)), "unreachable",
          "\"" + g.nonterminals[static_cast<std::size_t>(n)] + "\" is not reachable from start");
  return out;
}

std::string render_grammar(const Grammar& g) {
  std::string out;
  for (const auto& t : g.terminals) out += t.name + " : /" + render_regex(t.pattern) + "/ ;\n";
  for (const auto& t : g.terminals)
    if (t.ignored) out += "%ignore " + t.name + " ;\n";
  // Start symbol first so that it stays the start after re-parsing.
  std::vector<std::int32_t> order{g.start};
  for (std::int32_t n = 0; n < static_cast<std::int32_t>(g.nonterminals.size()); ++n)
    if (n != g.start) order.push_back(n);
  for (auto n : order) {
    out += g.nonterminals[static_cast<std::size_t>(n)] + " :";
    bool first = true;
    for (const auto& r : g.rules) {
      if (r.lhs != n) continue;
      if (!first) out += " |";
      first = false;
      for (const auto& s : r.rhs) out += " " + s.name;
    }
    out += " ;\n";
  }
  return out;
}

}  // namespace gcd
