#pragma once

#include "error.hpp"
#include "nat.hpp"
#include "tree.hpp"
#include "tree_text.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace matula {

enum class SizeKind { leaves, vertices };

/// Which trees to generate: (topological, leaves), (binary, leaves) and
/// (rooted, vertices) are the finite classes supported.
struct EnumSpec {
  TreeClass tree_class = TreeClass::topological;
  SizeKind size_kind = SizeKind::leaves;
  std::uint64_t size = 1;
};

struct EnumCaps {
  std::uint64_t topological_leaves = 12;
  std::uint64_t binary_leaves = 20;
  std::uint64_t rooted_vertices = 14;
};

namespace detail {

inline void validate(const EnumSpec& spec) {
  const bool ok = (spec.tree_class == TreeClass::rooted && spec.size_kind == SizeKind::vertices) ||
                  (spec.tree_class != TreeClass::rooted && spec.size_kind == SizeKind::leaves);
  if (!ok) {
    throw DomainError(std::string("unsupported enumeration: ") + std::string(to_string(spec.tree_class)) +
                      " trees by " + (spec.size_kind == SizeKind::leaves ? "leaves" : "vertices"));
  }
  if (spec.size < 1) throw BadSize("enumeration size must be at least 1");
}

// Calls emit(parts) for every multiset of trees drawn from by_size[1..]
// whose sizes sum to `remaining`, with min_parts..max_parts members and no
// member larger than max_size. Members are chosen in non-increasing
// (size, index) order so each multiset appears once.
template <typename Emit>
void for_each_multiset(const std::vector<std::vector<Tree>>& by_size, std::uint64_t remaining,
                       std::uint64_t max_size, std::size_t max_index, std::size_t min_parts,
                       std::size_t max_parts, std::vector<Tree>& parts, Emit& emit) {
  if (remaining == 0) {
    if (parts.size() >= min_parts) emit(parts);
    return;
  }
  if (parts.size() == max_parts) return;
  for (std::uint64_t size = std::min(remaining, max_size); size >= 1; --size) {
    const auto& pool = by_size[size];
    const std::size_t top = size == max_size ? std::min(max_index, pool.size()) : pool.size();
    for (std::size_t i = 0; i < top; ++i) {
      parts.push_back(pool[i]);
      for_each_multiset(by_size, remaining - size, size, i + 1, min_parts, max_parts, parts, emit);
      parts.pop_back();
    }
  }
}

inline std::vector<std::vector<Tree>> generate_by_size(TreeClass cls, std::uint64_t n) {
  std::vector<std::vector<Tree>> by_size(n + 1);
  by_size[1].push_back(leaf());
  for (std::uint64_t k = 2; k <= n; ++k) {
    std::vector<Tree> out;
    std::vector<Tree> parts;
    auto emit = [&](const std::vector<Tree>& ps) { out.push_back(join(ps)); };
    switch (cls) {
      case TreeClass::rooted:
        for_each_multiset(by_size, k - 1, k - 1, SIZE_MAX, 1, SIZE_MAX, parts, emit);
        break;
      case TreeClass::topological:
        for_each_multiset(by_size, k, k - 1, SIZE_MAX, 2, SIZE_MAX, parts, emit);
        break;
      case TreeClass::binary:
        for_each_multiset(by_size, k, k - 1, SIZE_MAX, 2, 2, parts, emit);
        break;
    }
    std::sort(out.begin(), out.end());
    by_size[k] = std::move(out);
  }
  return by_size;
}

inline Nat multichoose(const Nat& kinds, std::uint64_t c) {
  Nat r = 1;
  for (std::uint64_t i = 0; i < c; ++i) {
    r *= kinds + i;
    r /= i + 1;
  }
  return r;
}

// [x^target] of prod_{j=1..max_size} (1 - x^j)^{-counts[j]}.
inline Nat euler_coefficient(const std::vector<Nat>& counts, std::uint64_t max_size, std::uint64_t target) {
  std::vector<Nat> poly(target + 1, 0);
  poly[0] = 1;
  for (std::uint64_t j = 1; j <= max_size; ++j) {
    if (counts[j] == 0) continue;
    std::vector<Nat> next(target + 1, 0);
    for (std::uint64_t t = 0; t <= target; ++t) {
      if (poly[t] == 0) continue;
      for (std::uint64_t c = 0; t + c * j <= target; ++c) next[t + c * j] += poly[t] * multichoose(counts[j], c);
    }
    poly = std::move(next);
  }
  return poly[target];
}

}  // namespace detail

/// Every tree of the class and size exactly once, in canonical form,
/// sorted by canonical serialization.
inline std::vector<Tree> enumerate(const EnumSpec& spec, const EnumCaps& caps = {}) {
  detail::validate(spec);
  const std::uint64_t cap = spec.tree_class == TreeClass::rooted        ? caps.rooted_vertices
                            : spec.tree_class == TreeClass::topological ? caps.topological_leaves
                                                                        : caps.binary_leaves;
  if (spec.size > cap) {
    throw SizeTooLarge("enumeration of " + std::string(to_string(spec.tree_class)) + " trees of size " +
                       std::to_string(spec.size) + " exceeds the cap " + std::to_string(cap));
  }
  auto by_size = detail::generate_by_size(spec.tree_class, spec.size);
  std::vector<std::pair<std::string, Tree>> keyed;
  keyed.reserve(by_size[spec.size].size());
  for (Tree& t : by_size[spec.size]) keyed.emplace_back(serialize(t), std::move(t));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Tree> out;
  out.reserve(keyed.size());
  for (auto& [key, t] : keyed) out.push_back(std::move(t));
  return out;
}

/// Size of enumerate(spec), by counting multiset compositions directly.
inline Nat count(const EnumSpec& spec) {
  detail::validate(spec);
  const std::uint64_t n = spec.size;
  std::vector<Nat> a(n + 1, 0);
  a[1] = 1;
  for (std::uint64_t k = 2; k <= n; ++k) {
    switch (spec.tree_class) {
      case TreeClass::rooted:
        a[k] = detail::euler_coefficient(a, k - 1, k - 1);
        break;
      case TreeClass::topological:
        a[k] = detail::euler_coefficient(a, k - 1, k);
        break;
      case TreeClass::binary:
        for (std::uint64_t i = 1; 2 * i < k; ++i) a[k] += a[i] * a[k - i];
        if (k % 2 == 0) a[k] += a[k / 2] * (a[k / 2] + 1) / 2;
        break;
    }
  }
  return a[n];
}

}  // namespace matula
