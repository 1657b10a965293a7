#pragma once

#include "error.hpp"
#include "tree.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace matula {

// Text format:
//
//   tree := "*" | "(" tree { "," tree } ")"
//
// "*" is a single vertex, a parenthesised list is a root whose branches
// are the listed trees. Whitespace between tokens is ignored.

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

}  // namespace detail

/// Parses tree text; input child order is irrelevant, the result is canonical.
/// Throws SyntaxError with the byte offset of the first bad token.
inline Tree parse(std::string_view s) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < s.size() && detail::is_space(s[pos])) ++pos;
  };

  std::vector<std::vector<Tree>> open;  // children collected so far per unclosed '('
  for (;;) {
    // Expect a tree.
    skip();
    Tree value;
    if (pos < s.size() && s[pos] == '*') {
      ++pos;
    } else if (pos < s.size() && s[pos] == '(') {
      ++pos;
      open.emplace_back();
      continue;
    } else {
      throw SyntaxError(pos, {"'*'", "'('"});
    }

    // A complete tree: attach it, closing as many parentheses as follow.
    for (;;) {
      skip();
      if (open.empty()) {
        if (pos != s.size()) throw SyntaxError(pos, {"end of input"});
        return value;
      }
      open.back().push_back(std::move(value));
      if (pos < s.size() && s[pos] == ',') {
        ++pos;
        break;
      }
      if (pos < s.size() && s[pos] == ')') {
        ++pos;
        value = join(std::move(open.back()));
        open.pop_back();
        continue;
      }
      throw SyntaxError(pos, {"','", "')'"});
    }
  }
}

namespace detail {

inline void serialize_into(const Tree& t, std::string& out) {
  if (t.is_leaf()) {
    out += '*';
    return;
  }
  out += '(';
  bool first = true;
  for (const Tree& c : t.children()) {
    if (!first) out += ',';
    first = false;
    serialize_into(c, out);
  }
  out += ')';
}

}  // namespace detail

inline std::string serialize(const Tree& t) {
  std::string out;
  out.reserve(4 * t.vertices());
  detail::serialize_into(t, out);
  return out;
}

/// Graphviz digraph, root at the top. Vertices are numbered n0, n1, ... in
/// canonical depth-first preorder.
inline std::string to_dot(const Tree& t) {
  std::string nodes;
  std::string edges;
  std::size_t next = 0;
  // (vertex, parent id) with parent id == npos for the root.
  std::vector<std::pair<const Tree*, std::size_t>> stack{{&t, std::string::npos}};
  while (!stack.empty()) {
    auto [v, parent] = stack.back();
    stack.pop_back();
    const std::size_t id = next++;
    nodes += "  n" + std::to_string(id) + ";\n";
    if (parent != std::string::npos) {
      edges += "  n" + std::to_string(parent) + " -> n" + std::to_string(id) + ";\n";
    }
    auto ch = v->children();
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.emplace_back(&*it, id);
  }
  return "digraph tree {\n  rankdir=TB;\n  node [shape=circle, label=\"\", width=0.15];\n" + nodes + edges + "}\n";
}

}  // namespace matula
