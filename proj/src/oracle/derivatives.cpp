#include "gcd/oracle/derivatives.hpp"

namespace gcd::oracle {

struct DerivativeLexemes::Node {
  enum class Kind { Empty, Eps, Set, Cat, Alt, Star } kind;
  ByteSet set;
  Ptr a, b;
};

namespace {

using Node = DerivativeLexemes::Node;
using Ptr = DerivativeLexemes::Ptr;
using K = Node::Kind;

const Ptr& empty_node() {
  static const Ptr p = std::make_shared<Node>(Node{K::Empty, {}, nullptr, nullptr});
  return p;
}
const Ptr& eps_node() {
  static const Ptr p = std::make_shared<Node>(Node{K::Eps, {}, nullptr, nullptr});
  return p;
}

Ptr set_of(const ByteSet& s) {
  if (s.none()) return empty_node();
  return std::make_shared<Node>(Node{K::Set, s, nullptr, nullptr});
}

Ptr cat(Ptr a, Ptr b) {
  if (a->kind == K::Empty || b->kind == K::Empty) return empty_node();
  if (a->kind == K::Eps) return b;
  if (b->kind == K::Eps) return a;
  return std::make_shared<Node>(Node{K::Cat, {}, std::move(a), std::move(b)});
}

Ptr alt(Ptr a, Ptr b) {
  if (a->kind == K::Empty) return b;
  if (b->kind == K::Empty) return a;
  if (a == b) return a;
  return std::make_shared<Node>(Node{K::Alt, {}, std::move(a), std::move(b)});
}

Ptr star(Ptr a) {
  if (a->kind == K::Empty || a->kind == K::Eps) return eps_node();
  if (a->kind == K::Star) return a;
  return std::make_shared<Node>(Node{K::Star, {}, std::move(a), nullptr});
}

bool nullable(const Ptr& r) {
  switch (r->kind) {
    case K::Empty: case K::Set: return false;
    case K::Eps: case K::Star: return true;
    case K::Cat: return nullable(r->a) && nullable(r->b);
    case K::Alt: return nullable(r->a) || nullable(r->b);
  }
  return false;
}

bool is_empty(const Ptr& r) {
  switch (r->kind) {
    case K::Empty: return true;
    case K::Eps: case K::Star: return false;
    case K::Set: return r->set.none();
    case K::Cat: return is_empty(r->a) || is_empty(r->b);
    case K::Alt: return is_empty(r->a) && is_empty(r->b);
  }
  return true;
}

Ptr derive(const Ptr& r, std::uint8_t c) {
  switch (r->kind) {
    case K::Empty: case K::Eps: return empty_node();
    case K::Set: return r->set.test(c) ? eps_node() : empty_node();
    case K::Cat: {
      Ptr left = cat(derive(r->a, c), r->b);
      return nullable(r->a) ? alt(left, derive(r->b, c)) : left;
    }
    case K::Alt: return alt(derive(r->a, c), derive(r->b, c));
    case K::Star: return cat(derive(r->a, c), r);
  }
  return empty_node();
}

Ptr convert(const RegexNode& n) {
  using R = RegexNode::Kind;
  switch (n.kind) {
    case R::Literal: case R::Class: case R::AnyByte:
      return set_of(leaf_bytes(n));
    case R::Concat: {
      Ptr out = eps_node();
      for (const auto& c : n.children) out = cat(out, convert(c));
      return out;
    }
    case R::Alternation: {
      Ptr out = empty_node();
      for (const auto& c : n.children) out = alt(out, convert(c));
      return out;
    }
    case R::Star: return star(convert(n.children.at(0)));
    case R::Plus: {
      Ptr c = convert(n.children.at(0));
      return cat(c, star(c));
    }
    case R::Optional: return alt(eps_node(), convert(n.children.at(0)));
    case R::Repeat: {
      Ptr c = convert(n.children.at(0));
      // x{m,n} = x^m (x (x ...)?)?
      Ptr tail = eps_node();
      for (int i = n.min; i < n.max; ++i) tail = alt(eps_node(), cat(c, tail));
      Ptr out = eps_node();
      for (int i = 0; i < n.min; ++i) out = cat(out, c);
      return cat(out, tail);
    }
  }
  return empty_node();
}

}  // namespace

DerivativeLexemes::DerivativeLexemes(const std::vector<TerminalDef>& terminals) {
  for (const auto& t : terminals) roots_.push_back(convert(t.pattern));
}

DerivativeLexemes::~DerivativeLexemes() = default;

const std::vector<Ptr>& DerivativeLexemes::derivatives(std::string_view s) const {
  if (s.empty()) return roots_;
  auto it = memo_.find(s);
  if (it != memo_.end()) return it->second;
  std::vector<Ptr> parent = derivatives(s.substr(0, s.size() - 1));
  auto c = static_cast<std::uint8_t>(s.back());
  for (auto& p : parent) p = derive(p, c);
  return memo_.emplace(std::string(s), std::move(parent)).first->second;
}

bool DerivativeLexemes::is_live_prefix(std::string_view s) const {
  for (const auto& d : derivatives(s))
    if (!is_empty(d)) return true;
  return false;
}

TerminalId DerivativeLexemes::accepted_terminal(std::string_view s) const {
  const auto& ds = derivatives(s);
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (nullable(ds[i])) return static_cast<TerminalId>(i);
  return -1;
}

std::vector<TerminalId> DerivativeLexemes::live_terminals(std::string_view s) const {
  std::vector<TerminalId> out;
  const auto& ds = derivatives(s);
  for (std::size_t i = 0; i < ds.size(); ++i)
    if (!is_empty(ds[i])) out.push_back(static_cast<TerminalId>(i));
  return out;
}

bool DerivativeLexemes::matches(TerminalId t, std::string_view s) const {
  return nullable(derivatives(s)[static_cast<std::size_t>(t)]);
}

}  // namespace gcd::oracle
