#pragma once

#include "error.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace matula {

/// An unlabeled rooted tree, kept as an immutable value in canonical form.
///
/// Children are stored sorted by a structural total order (fewer vertices
/// first, then children compared lexicographically), so two Trees compare
/// equal exactly when they are isomorphic as rooted trees. Subtrees are
/// shared between values; copying a Tree is a reference-count bump.
class Tree {
 public:
  /// The single-vertex tree K_1.
  Tree() : node_(leaf_node()) {}

  std::span<const Tree> children() const;
  std::size_t arity() const;
  bool is_leaf() const;

  std::uint64_t vertices() const;
  std::uint64_t leaves() const;
  std::uint64_t height() const;
  std::size_t hash() const;

  friend bool operator==(const Tree& a, const Tree& b) {
    return a.node_ == b.node_ || (a.hash() == b.hash() && compare(a, b) == std::strong_ordering::equal);
  }

  friend std::strong_ordering operator<=>(const Tree& a, const Tree& b) { return compare(a, b); }

 private:
  struct Node;

  explicit Tree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static std::strong_ordering compare(const Tree& a, const Tree& b);
  static const std::shared_ptr<const Node>& leaf_node();

  friend Tree join(std::vector<Tree> branches);

  std::shared_ptr<const Node> node_;
};

struct Tree::Node {
  std::vector<Tree> children;
  std::uint64_t vertices = 1;
  std::uint64_t leaves = 1;
  std::uint64_t height = 0;
  std::size_t hash = 0x9e3779b97f4a7c15ull;
};

inline std::span<const Tree> Tree::children() const { return node_->children; }
inline std::size_t Tree::arity() const { return node_->children.size(); }
inline bool Tree::is_leaf() const { return node_->children.empty(); }
inline std::uint64_t Tree::vertices() const { return node_->vertices; }
inline std::uint64_t Tree::leaves() const { return node_->leaves; }
inline std::uint64_t Tree::height() const { return node_->height; }
inline std::size_t Tree::hash() const { return node_->hash; }

inline const std::shared_ptr<const Tree::Node>& Tree::leaf_node() {
  static const std::shared_ptr<const Node> node = std::make_shared<const Node>();
  return node;
}

inline std::strong_ordering Tree::compare(const Tree& a, const Tree& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.vertices() <=> b.vertices(); c != 0) return c;
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  const std::size_t n = std::min(ca.size(), cb.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(ca[i], cb[i]); c != 0) return c;
  }
  return ca.size() <=> cb.size();
}

struct TreeHash {
  std::size_t operator()(const Tree& t) const { return t.hash(); }
};

inline Tree leaf() { return Tree{}; }

/// Joins the roots of the given branches to a new common root. The branch
/// order is irrelevant.
inline Tree join(std::vector<Tree> branches) {
  if (branches.empty()) throw DomainError("join needs at least one branch");
  std::sort(branches.begin(), branches.end());
  auto node = std::make_shared<Tree::Node>();
  node->vertices = 1;
  node->leaves = 0;
  node->height = 0;
  std::size_t h = 0xcbf29ce484222325ull ^ branches.size();
  for (const Tree& b : branches) {
    node->vertices += b.vertices();
    node->leaves += b.leaves();
    node->height = std::max(node->height, b.height() + 1);
    h ^= b.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  node->hash = h;
  node->children = std::move(branches);
  return Tree(std::move(node));
}

inline Tree join(std::initializer_list<Tree> branches) { return join(std::vector<Tree>(branches)); }

/// K_{1,n}: a root with n leaves.
inline Tree star(std::uint64_t n) {
  if (n < 1) throw BadSize("star needs n >= 1");
  return join(std::vector<Tree>(n, leaf()));
}

/// F_n: F_1 = K_1, F_n = join(K_1, F_{n-1}).
inline Tree binary_caterpillar(std::uint64_t n) {
  if (n < 1) throw BadSize("binary caterpillar needs n >= 1");
  Tree t = leaf();
  for (std::uint64_t i = 1; i < n; ++i) t = join({leaf(), t});
  return t;
}

/// Replaces the first two branches T_1, T_2 (in canonical order) by the
/// single branch join(T_1, T_2). Needs at least three branches; the leaf
/// count is unchanged.
inline Tree apply_F(const Tree& t) {
  if (t.arity() < 3) throw TooFewBranches(t.arity());
  auto ch = t.children();
  std::vector<Tree> branches;
  branches.reserve(ch.size() - 1);
  branches.push_back(join({ch[0], ch[1]}));
  branches.insert(branches.end(), ch.begin() + 2, ch.end());
  return join(std::move(branches));
}

struct TreeParams {
  std::uint64_t vertices = 0;
  std::uint64_t leaves = 0;
  std::uint64_t height = 0;
  std::uint64_t max_outdegree = 0;
  std::map<std::uint64_t, std::uint64_t> outdegrees;  // outdegree -> number of vertices
  std::uint64_t wiener = 0;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

/// Structural parameters. The Wiener index is the sum over edges of the
/// product of the two component sizes the edge separates.
inline TreeParams params(const Tree& t) {
  TreeParams p;
  p.vertices = t.vertices();
  p.leaves = t.leaves();
  p.height = t.height();
  std::vector<const Tree*> stack{&t};
  while (!stack.empty()) {
    const Tree* v = stack.back();
    stack.pop_back();
    p.outdegrees[v->arity()] += 1;
    p.max_outdegree = std::max<std::uint64_t>(p.max_outdegree, v->arity());
    for (const Tree& c : v->children()) {
      p.wiener += c.vertices() * (p.vertices - c.vertices());
      stack.push_back(&c);
    }
  }
  return p;
}

enum class TreeClass { rooted, topological, binary };

inline std::string_view to_string(TreeClass c) {
  switch (c) {
    case TreeClass::rooted: return "rooted";
    case TreeClass::topological: return "topological";
    case TreeClass::binary: return "binary";
  }
  return "?";
}

struct ClassSet {
  bool rooted = true;
  bool topological = false;
  bool binary = false;

  bool contains(TreeClass c) const {
    switch (c) {
      case TreeClass::rooted: return rooted;
      case TreeClass::topological: return topological;
      case TreeClass::binary: return binary;
    }
    return false;
  }

  friend bool operator==(const ClassSet&, const ClassSet&) = default;
};

/// Topological: no vertex of outdegree 1. Binary: every outdegree is 0 or 2.
inline ClassSet classify(const Tree& t) {
  bool has_unary = false;
  bool only_binary = true;
  std::vector<const Tree*> stack{&t};
  while (!stack.empty()) {
    const Tree* v = stack.back();
    stack.pop_back();
    const std::size_t d = v->arity();
    if (d == 1) has_unary = true;
    if (d != 0 && d != 2) only_binary = false;
    for (const Tree& c : v->children()) stack.push_back(&c);
  }
  return ClassSet{true, !has_unary, only_binary};
}

}  // namespace matula

template <>
struct std::hash<matula::Tree> {
  std::size_t operator()(const matula::Tree& t) const noexcept { return t.hash(); }
};
