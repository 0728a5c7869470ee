#include "gcd/regex.hpp"

#include <cctype>
#include <charconv>

#include "gcd/error.hpp"

namespace gcd {

namespace {

constexpr int kMaxRepeat = 1000;

ByteSet digit_set() {
  ByteSet s;
  for (int c = '0'; c <= '9'; ++c) s.set(static_cast<std::size_t>(c));
  return s;
}

ByteSet word_set() {
  ByteSet s = digit_set();
  for (int c = 'a'; c <= 'z'; ++c) s.set(static_cast<std::size_t>(c));
  for (int c = 'A'; c <= 'Z'; ++c) s.set(static_cast<std::size_t>(c));
  s.set('_');
  return s;
}

ByteSet space_set() {
  ByteSet s;
  for (char c : {' ', '\t', '\n', '\r', '\f', '\v'}) s.set(static_cast<unsigned char>(c));
  return s;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

class RegexParser {
 public:
  explicit RegexParser(std::string_view text) : text_(text) {}

  RegexNode parse() {
    RegexNode node = parse_alternation();
    if (pos_ != text_.size()) fail("unexpected ')'");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw RegexError(pos_, msg); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  RegexNode parse_alternation() {
    std::vector<RegexNode> alts;
    alts.push_back(parse_concat());
    while (!at_end() && peek() == '|') {
      ++pos_;
      alts.push_back(parse_concat());
    }
    return RegexNode::alternation(std::move(alts));
  }

  RegexNode parse_concat() {
    std::vector<RegexNode> parts;
    while (!at_end() && peek() != '|' && peek() != ')') parts.push_back(parse_postfix());
    return RegexNode::concat(std::move(parts));
  }

  RegexNode parse_postfix() {
    RegexNode node = parse_atom();
    while (!at_end()) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        node = RegexNode::unary(RegexNode::Kind::Star, std::move(node));
      } else if (c == '+') {
        ++pos_;
        node = RegexNode::unary(RegexNode::Kind::Plus, std::move(node));
      } else if (c == '?') {
        ++pos_;
        node = RegexNode::unary(RegexNode::Kind::Optional, std::move(node));
      } else if (c == '{') {
        node = parse_braces(std::move(node));
      } else {
        break;
      }
    }
    return node;
  }

  int parse_int() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected a number in repetition");
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || value > kMaxRepeat) fail("repetition count too large");
    return value;
  }

  RegexNode parse_braces(RegexNode node) {
    ++pos_;  // '{'
    int lo = parse_int();
    int hi = lo;
    bool unbounded = false;
    if (!at_end() && peek() == ',') {
      ++pos_;
      if (!at_end() && peek() == '}')
        unbounded = true;
      else
        hi = parse_int();
    }
    if (at_end() || peek() != '}') fail("expected '}'");
    ++pos_;
    if (unbounded) {
      std::vector<RegexNode> parts;
      if (lo > 0) parts.push_back(RegexNode::repeat(node, lo, lo));
      parts.push_back(RegexNode::unary(RegexNode::Kind::Star, std::move(node)));
      return RegexNode::concat(std::move(parts));
    }
    if (hi < lo) fail("repetition bounds out of order");
    return RegexNode::repeat(std::move(node), lo, hi);
  }

  // Shared by top level and class bodies. Returns true and fills `set` for
  // class escapes (\d \w \s), otherwise sets `byte`.
  bool parse_escape(std::uint8_t& byte, ByteSet& set) {
    ++pos_;  // backslash
    if (at_end()) fail("dangling escape");
    char c = text_[pos_++];
    switch (c) {
      case 'n': byte = '\n'; return false;
      case 't': byte = '\t'; return false;
      case 'r': byte = '\r'; return false;
      case 'f': byte = '\f'; return false;
      case 'v': byte = '\v'; return false;
      case '0': byte = 0; return false;
      case 'd': set = digit_set(); return true;
      case 'w': set = word_set(); return true;
      case 's': set = space_set(); return true;
      case 'D': set = ~digit_set(); return true;
      case 'W': set = ~word_set(); return true;
      case 'S': set = ~space_set(); return true;
      case 'x': {
        if (pos_ + 2 > text_.size()) fail("truncated \\x escape");
        int hi = hex_value(text_[pos_]);
        int lo = hex_value(text_[pos_ + 1]);
        if (hi < 0 || lo < 0) fail("bad \\x escape");
        pos_ += 2;
        byte = static_cast<std::uint8_t>(hi * 16 + lo);
        return false;
      }
      default:
        if (std::isalnum(static_cast<unsigned char>(c))) {
          --pos_;
          fail(std::string("unknown escape \\") + c);
        }
        byte = static_cast<std::uint8_t>(c);
        return false;
    }
  }

  RegexNode parse_atom() {
    char c = peek();
    switch (c) {
      case '(': {
        ++pos_;
        RegexNode inner = parse_alternation();
        if (at_end() || peek() != ')') fail("expected ')'");
        ++pos_;
        return inner;
      }
      case '[':
        return parse_class();
      case '.':
        ++pos_;
        return RegexNode::any_byte();
      case '*':
      case '+':
      case '?':
      case '{':
        fail(std::string("nothing to repeat before '") + c + "'");
      case '\\': {
        std::uint8_t b = 0;
        ByteSet set;
        if (parse_escape(b, set)) return RegexNode::byte_class(set);
        return RegexNode::literal(b);
      }
      default:
        ++pos_;
        return RegexNode::literal(static_cast<std::uint8_t>(c));
    }
  }

  std::uint8_t class_byte(ByteSet& set, bool& is_set) {
    char c = peek();
    if (c == '\\') {
      std::uint8_t b = 0;
      is_set = parse_escape(b, set);
      return b;
    }
    if (static_cast<unsigned char>(c) >= 0x80) fail("non-ASCII byte inside a class; use \\xHH");
    ++pos_;
    is_set = false;
    return static_cast<std::uint8_t>(c);
  }

  RegexNode parse_class() {
    ++pos_;  // '['
    bool negate = false;
    if (!at_end() && peek() == '^') {
      negate = true;
      ++pos_;
    }
    ByteSet set;
    bool first = true;
    while (true) {
      if (at_end()) fail("unterminated class");
      if (peek() == ']' && !first) break;
      first = false;
      ByteSet escaped;
      bool is_set = false;
      std::uint8_t lo = class_byte(escaped, is_set);
      if (is_set) {
        set |= escaped;
        continue;
      }
      if (pos_ + 1 < text_.size() && peek() == '-' && text_[pos_ + 1] != ']') {
        ++pos_;
        bool hi_is_set = false;
        std::uint8_t hi = class_byte(escaped, hi_is_set);
        if (hi_is_set) fail("class escape cannot end a range");
        if (hi < lo) fail("class range out of order");
        for (int b = lo; b <= hi; ++b) set.set(static_cast<std::size_t>(b));
      } else {
        set.set(lo);
      }
    }
    ++pos_;  // ']'
    if (negate) set = ~set;
    if (set.none()) fail("empty byte class");
    return RegexNode::byte_class(set);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool is_meta(std::uint8_t b) {
  switch (b) {
    case '\\': case '/': case '.': case '*': case '+': case '?': case '|':
    case '(': case ')': case '[': case ']': case '{': case '}': case '^':
    case '-': case '$':
      return true;
    default:
      return false;
  }
}

void render_byte(std::string& out, std::uint8_t b, bool in_class) {
  static const char* hex = "0123456789abcdef";
  if (b == '\n') {
    out += "\\n";
  } else if (b == '\t') {
    out += "\\t";
  } else if (b == '\r') {
    out += "\\r";
  } else if (b < 0x20 || b >= 0x7f) {
    out += "\\x";
    out += hex[b >> 4];
    out += hex[b & 15];
  } else if (is_meta(b) || (in_class && b == ' ')) {
    if (in_class && b == ' ') {
      out += ' ';
    } else {
      out += '\\';
      out += static_cast<char>(b);
    }
  } else {
    out += static_cast<char>(b);
  }
}

void render_set(std::string& out, const ByteSet& set) {
  ByteSet shown = set;
  out += '[';
  if (set.count() > 128) {
    out += '^';
    shown = ~set;
  }
  int b = 0;
  while (b < 256) {
    if (!shown.test(static_cast<std::size_t>(b))) {
      ++b;
      continue;
    }
    int e = b;
    while (e + 1 < 256 && shown.test(static_cast<std::size_t>(e + 1))) ++e;
    render_byte(out, static_cast<std::uint8_t>(b), true);
    if (e > b) {
      if (e > b + 1) out += '-';
      render_byte(out, static_cast<std::uint8_t>(e), true);
    }
    b = e + 1;
  }
  out += ']';
}

void render(std::string& out, const RegexNode& n);

void render_wrapped(std::string& out, const RegexNode& n, bool wrap) {
  if (wrap) out += '(';
  render(out, n);
  if (wrap) out += ')';
}

bool needs_group_as_operand(const RegexNode& n) {
  return n.kind == RegexNode::Kind::Alternation ||
         (n.kind == RegexNode::Kind::Concat && !n.children.empty());
}

void render(std::string& out, const RegexNode& n) {
  using K = RegexNode::Kind;
  switch (n.kind) {
    case K::Literal:
      render_byte(out, n.byte, false);
      break;
    case K::Class:
      render_set(out, n.bytes);
      break;
    case K::AnyByte:
      out += '.';
      break;
    case K::Concat:
      if (n.children.empty()) out += "()";
      for (const auto& c : n.children) render_wrapped(out, c, needs_group_as_operand(c));
      break;
    case K::Alternation:
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out += '|';
        render_wrapped(out, n.children[i], n.children[i].kind == K::Alternation);
      }
      break;
    case K::Star:
    case K::Plus:
    case K::Optional:
    case K::Repeat: {
      const auto& c = n.children.front();
      render_wrapped(out, c, needs_group_as_operand(c));
      if (n.kind == K::Star) out += '*';
      if (n.kind == K::Plus) out += '+';
      if (n.kind == K::Optional) out += '?';
      if (n.kind == K::Repeat) {
        out += '{' + std::to_string(n.min);
        if (n.max != n.min) out += ',' + std::to_string(n.max);
        out += '}';
      }
      break;
    }
  }
}

}  // namespace

RegexNode RegexNode::literal(std::uint8_t b) {
  RegexNode n;
  n.kind = Kind::Literal;
  n.byte = b;
  return n;
}

RegexNode RegexNode::byte_class(const ByteSet& set) {
  RegexNode n;
  n.kind = Kind::Class;
  n.bytes = set;
  return n;
}

RegexNode RegexNode::any_byte() {
  RegexNode n;
  n.kind = Kind::AnyByte;
  return n;
}

RegexNode RegexNode::concat(std::vector<RegexNode> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  RegexNode n;
  n.kind = Kind::Concat;
  n.children = std::move(parts);
  return n;
}

RegexNode RegexNode::alternation(std::vector<RegexNode> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  RegexNode n;
  n.kind = Kind::Alternation;
  n.children = std::move(parts);
  return n;
}

RegexNode RegexNode::unary(Kind kind, RegexNode child) {
  RegexNode n;
  n.kind = kind;
  n.children.push_back(std::move(child));
  return n;
}

RegexNode RegexNode::repeat(RegexNode child, int min, int max) {
  RegexNode n = unary(Kind::Repeat, std::move(child));
  n.min = min;
  n.max = max;
  return n;
}

RegexNode parse_regex(std::string_view pattern) { return RegexParser(pattern).parse(); }

std::string render_regex(const RegexNode& node) {
  std::string out;
  render(out, node);
  return out;
}

bool regex_nullable(const RegexNode& n) {
  using K = RegexNode::Kind;
  switch (n.kind) {
    case K::Literal:
    case K::Class:
    case K::AnyByte:
      return false;
    case K::Concat:
      for (const auto& c : n.children)
        if (!regex_nullable(c)) return false;
      return true;
    case K::Alternation:
      for (const auto& c : n.children)
        if (regex_nullable(c)) return true;
      return false;
    case K::Star:
    case K::Optional:
      return true;
    case K::Plus:
      return regex_nullable(n.children.front());
    case K::Repeat:
      return n.min == 0 || regex_nullable(n.children.front());
  }
  return false;
}

ByteSet leaf_bytes(const RegexNode& n) {
  switch (n.kind) {
    case RegexNode::Kind::Literal: {
      ByteSet s;
      s.set(n.byte);
      return s;
    }
    case RegexNode::Kind::Class:
      return n.bytes;
    case RegexNode::Kind::AnyByte: {
      ByteSet s;
      s.set();
      s.reset('\n');
      return s;
    }
    default:
      return {};
  }
}

}  // namespace gcd
