#pragma once

#include <bitset>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace gcd {

using ByteSet = std::bitset<256>;

/// Byte-level regular expression tree.
///
/// `AnyByte` is `.` and matches every byte except `\n`. `Repeat` is the
/// bounded form `{min,max}`; unbounded `{m,}` is parsed as `m` copies
/// followed by a star.
struct RegexNode {
  enum class Kind : std::uint8_t {
    Literal,
    Class,
    AnyByte,
    Concat,
    Alternation,
    Star,
    Plus,
    Optional,
    Repeat,
  };

  Kind kind = Kind::Concat;
  std::uint8_t byte = 0;
  ByteSet bytes;
  int min = 0;
  int max = 0;
  std::vector<RegexNode> children;

  bool operator==(const RegexNode&) const = default;

  static RegexNode literal(std::uint8_t b);
  static RegexNode byte_class(const ByteSet& set);
  static RegexNode any_byte();
  static RegexNode concat(std::vector<RegexNode> parts);
  static RegexNode alternation(std::vector<RegexNode> parts);
  static RegexNode unary(Kind kind, RegexNode child);
  static RegexNode repeat(RegexNode child, int min, int max);
};

/// Parses the pattern body (without the surrounding slashes).
/// Throws RegexError with the byte offset of the problem.
RegexNode parse_regex(std::string_view pattern);

/// Inverse of parse_regex up to structural equality.
std::string render_regex(const RegexNode& node);

bool regex_nullable(const RegexNode& node);

/// Bytes matched by a Literal, Class or AnyByte node.
ByteSet leaf_bytes(const RegexNode& node);

/// Calls `fn(ByteSet)` for every leaf of the tree.
template <typename Fn>
void for_each_leaf(const RegexNode& node, Fn&& fn) {
  switch (node.kind) {
    case RegexNode::Kind::Literal:
    case RegexNode::Kind::Class:
    case RegexNode::Kind::AnyByte:
      fn(leaf_bytes(node));
      return;
    default:
      for (const auto& c : node.children) for_each_leaf(c, fn);
  }
}

}  // namespace gcd
