#pragma once

#include "enumerator.hpp"
#include "error.hpp"
#include "matula_codec.hpp"
#include "nat.hpp"
#include "prime_oracle.hpp"
#include "tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace matula {

/// q_1 = 1, q_k = 2 p_{q_{k-1}}; the Matula numbers of the binary
/// caterpillars F_k. Element i holds q_{i+1}.
inline std::vector<Nat> q_seq(std::uint64_t k_max, PrimeOracle& oracle) {
  if (k_max < 1) throw BadSize("q_seq needs k_max >= 1");
  MatulaEncoder enc(oracle);
  std::vector<Nat> q{1};
  for (std::uint64_t k = 2; k <= k_max; ++k) {
    try {
      q.push_back(2 * enc.prime_for(q.back()));
    } catch (IndexOutOfRange& e) {
      e.add_context("q_k is infeasible from k = " + std::to_string(k));
      throw;
    }
  }
  return q;
}

/// Branch leaf counts of S_k: with 2^{s+1} <= k < 2^{s+2} and
/// r = k - 2^{s+1}, the branches are S_{2^s}, S_{r+2^s} when r <= 2^s and
/// S_r, S_{2^{s+1}} otherwise.
inline std::pair<std::uint64_t, std::uint64_t> min_binary_split(std::uint64_t k) {
  if (k < 2) throw BadSize("S_k has branches only for k >= 2");
  std::uint64_t half = 1;  // 2^s
  while (4 * half <= k) half *= 2;
  const std::uint64_t r = k - 2 * half;
  if (r <= half) return {half, r + half};
  return {r, 2 * half};
}

/// l_1 = 1, l_k = p_{l_a} p_{l_b} with (a, b) = min_binary_split(k); the
/// Matula numbers of the trees S_k. Element i holds l_{i+1}.
inline std::vector<Nat> l_seq(std::uint64_t k_max, PrimeOracle& oracle) {
  if (k_max < 1) throw BadSize("l_seq needs k_max >= 1");
  MatulaEncoder enc(oracle);
  std::vector<Nat> l{1};
  for (std::uint64_t k = 2; k <= k_max; ++k) {
    auto [a, b] = min_binary_split(k);
    try {
      l.push_back(enc.prime_for(l[a - 1]) * enc.prime_for(l[b - 1]));
    } catch (IndexOutOfRange& e) {
      e.add_context("l_k is infeasible from k = " + std::to_string(k));
      throw;
    }
  }
  return l;
}

/// S_k, built from the same split recursion as l_k (no primes involved).
inline Tree min_binary_tree(std::uint64_t k) {
  if (k < 1) throw BadSize("min_binary_tree needs k >= 1");
  std::vector<Tree> s(k + 1);
  for (std::uint64_t j = 2; j <= k; ++j) {
    auto [a, b] = min_binary_split(j);
    s[j] = join({s[a], s[b]});
  }
  return s[k];
}

/// The n-vertex maximiser among rooted trees: a path of n-3 vertices
/// rooted at one end, with three leaves hung on the other end.
inline Tree gi_max_tree(std::uint64_t n) {
  if (n < 5) throw BadSize("gi_max_tree needs n >= 5, got " + std::to_string(n));
  Tree t = star(3);
  for (std::uint64_t i = 0; i < n - 4; ++i) t = join({t});
  return t;
}

struct LemmaInstance {
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;
  Nat lhs;  // p_{q_{k1}} * p_{q_{k2}}
  Nat rhs;  // q_{k1+k2}
  bool holds = false;
  bool equality = false;
};

/// p_{q_{k1}} p_{q_{k2}} <= q_{k1+k2} for every 1 <= k1 <= k2, k1+k2 <= k_max,
/// ordered by k1+k2 then k1.
inline std::vector<LemmaInstance> check_lemma1(std::uint64_t k_max, PrimeOracle& oracle) {
  const auto q = q_seq(k_max, oracle);
  MatulaEncoder enc(oracle);
  std::vector<Nat> p_of_q;  // p_{q_k} at k-1
  for (std::uint64_t k = 1; k < k_max; ++k) p_of_q.push_back(enc.prime_for(q[k - 1]));
  std::vector<LemmaInstance> out;
  for (std::uint64_t sum = 2; sum <= k_max; ++sum) {
    for (std::uint64_t k1 = 1; 2 * k1 <= sum; ++k1) {
      LemmaInstance r;
      r.k1 = k1;
      r.k2 = sum - k1;
      r.lhs = p_of_q[r.k1 - 1] * p_of_q[r.k2 - 1];
      r.rhs = q[sum - 1];
      r.holds = r.lhs <= r.rhs;
      r.equality = r.lhs == r.rhs;
      out.push_back(std::move(r));
    }
  }
  return out;
}

struct SearchReport {
  std::optional<Nat> optimum;  // empty when not even the incumbent could be evaluated
  Tree witness;
  std::uint64_t examined = 0;
  std::uint64_t pruned = 0;
  std::uint64_t frontier = 0;  // candidates left unresolved for lack of primes
  bool exhaustive = false;
};

namespace detail {

// Encodes every tree of the class in parallel and keeps the best under
// `better`. Matula numbers are distinct, so the result does not depend on
// scheduling.
template <typename Better>
SearchReport exhaustive_search(const EnumSpec& spec, PrimeOracle& oracle, const EnumCaps& caps, Better better) {
  const std::vector<Tree> trees = enumerate(spec, caps);
  const std::size_t workers = std::clamp<std::size_t>(
      std::min<std::size_t>(std::thread::hardware_concurrency(), trees.size() / 64), 1, 8);

  struct Best {
    std::optional<Nat> value;
    std::size_t index = 0;
    std::exception_ptr error;
  };
  std::vector<Best> best(workers);
  auto work = [&](std::size_t w) {
    try {
      MatulaEncoder enc(oracle);
      for (std::size_t i = w; i < trees.size(); i += workers) {
        Nat m = enc.encode(trees[i]);
        if (!best[w].value || better(m, *best[w].value)) {
          best[w].value = std::move(m);
          best[w].index = i;
        }
      }
    } catch (...) {
      best[w].error = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  SearchReport report;
  for (const Best& b : best) {
    if (b.error) std::rethrow_exception(b.error);
    if (b.value && (!report.optimum || better(*b.value, *report.optimum))) {
      report.optimum = b.value;
      report.witness = trees[b.index];
    }
  }
  report.examined = trees.size();
  report.exhaustive = true;
  return report;
}

}  // namespace detail

inline SearchReport exhaustive_max(const EnumSpec& spec, PrimeOracle& oracle, const EnumCaps& caps = {}) {
  return detail::exhaustive_search(spec, oracle, caps, std::greater<Nat>());
}

inline SearchReport exhaustive_min(const EnumSpec& spec, PrimeOracle& oracle, const EnumCaps& caps = {}) {
  return detail::exhaustive_search(spec, oracle, caps, std::less<Nat>());
}

/// Branch-and-bound minimum of the Matula number over binary trees with k
/// leaves, seeded with M(S_k) as the incumbent.
///
/// A root split into a- and b-leaf branches costs p_{M(A)} p_{M(B)}, which
/// is monotone in both Matula numbers, so a split is bounded below by
/// p_{L_a} p_{L_b} where L_j is the certified minimum for j leaves
/// (computed bottom-up by the same search). Branch Matula numbers are
/// budgeted through pi(x). When p_m is past the oracle's ceiling the bound
/// falls back to Robin's inequality and then to p_m > m; candidates the
/// bounds cannot dismiss are counted as frontier and the report is marked
/// non-exhaustive.
class BinaryMinSearch {
 public:
  explicit BinaryMinSearch(PrimeOracle& oracle) : oracle_(oracle), encoder_(oracle) {}

  SearchReport run(std::uint64_t k) {
    if (k < 1) throw BadSize("min_binary_bnb needs k >= 1");
    SearchReport report;
    report.witness = min_binary_tree(k);
    auto incumbent = try_encode(report.witness);
    if (incumbent) {
      Collected c = collect(k, *incumbent);
      for (Candidate& cand : c.found) {
        if (!report.optimum || cand.matula < *report.optimum) {
          report.optimum = cand.matula;
          report.witness = cand.tree;
        }
      }
      report.exhaustive = !c.frontier_lb || *c.frontier_lb > *report.optimum;
    }
    report.examined = examined_;
    report.pruned = pruned_;
    report.frontier = frontier_;
    return report;
  }

  /// Certified lower bound on M over all binary trees with j leaves.
  Nat slot_bound(std::uint64_t j) {
    if (j == 1) return 1;
    if (slot_bounds_.size() <= j) slot_bounds_.resize(j + 1);
    if (slot_bounds_[j]) return *slot_bounds_[j];

    std::optional<Nat> bound;
    if (auto incumbent = try_encode(min_binary_tree(j))) {
      Collected c = collect(j, *incumbent);
      for (const Candidate& cand : c.found) {
        if (!bound || cand.matula < *bound) bound = cand.matula;
      }
      if (c.frontier_lb && (!bound || *c.frontier_lb < *bound)) bound = c.frontier_lb;
    }
    if (!bound) {
      for (std::uint64_t a = 1; 2 * a <= j; ++a) {
        Nat v = prime_lower(slot_bound(a)) * prime_lower(slot_bound(j - a));
        if (!bound || v < *bound) bound = std::move(v);
      }
    }
    slot_bounds_[j] = bound;
    return *bound;
  }

 private:
  struct Candidate {
    Tree tree;
    Nat matula;
  };

  struct Collected {
    std::vector<Candidate> found;
    std::optional<Nat> frontier_lb;

    void note_frontier(const Nat& lb) {
      if (!frontier_lb || lb < *frontier_lb) frontier_lb = lb;
    }
  };

  std::optional<Nat> try_encode(const Tree& t) {
    try {
      return encoder_.encode(t);
    } catch (const RangeError&) {
      return std::nullopt;
    }
  }

  std::optional<Nat> prime_exact(const Nat& m) {
    auto small = to_u64(m);
    if (!small) return std::nullopt;
    try {
      return Nat(oracle_.nth_prime(*small));
    } catch (const IndexOutOfRange&) {
      return std::nullopt;
    }
  }

  // A value <= p_m.
  Nat prime_lower(const Nat& m) {
    if (auto p = prime_exact(m)) return *p;
    if (auto small = to_u64(m); small && *small >= 2) {
      // Relative slack covers rounding in the double evaluation.
      const double r = robin_lower(*small) * (1.0 - 1e-9);
      if (r > static_cast<double>(*small) + 1.0) return Nat(r);
    }
    return m + 1;
  }

  // Largest index m that can satisfy p_m <= x.
  Nat index_budget(const Nat& x) {
    if (x < 2) return 0;
    if (x <= oracle_.limit_value()) return oracle_.prime_count(static_cast<std::uint64_t>(x));
    return x - 1;
  }

  // All binary trees with j leaves and Matula number <= budget, plus a
  // lower bound over the ones the prime bound prevented from resolving.
  Collected collect(std::uint64_t j, const Nat& budget) {
    Collected out;
    if (j == 1) {
      if (budget >= 1) out.found.push_back({leaf(), 1});
      return out;
    }
    for (std::uint64_t a = 1; 2 * a <= j; ++a) {
      const std::uint64_t b = j - a;
      const Nat right_floor = prime_lower(slot_bound(b));
      if (prime_lower(slot_bound(a)) * right_floor > budget) {
        ++pruned_;
        continue;
      }
      Collected left = collect(a, index_budget(budget / right_floor));
      if (left.frontier_lb) {
        Nat lb = prime_lower(*left.frontier_lb) * right_floor;
        if (lb <= budget) out.note_frontier(lb);
      }
      for (const Candidate& A : left.found) {
        auto pa = prime_exact(A.matula);
        if (!pa) {
          Nat lb = prime_lower(A.matula) * right_floor;
          if (lb > budget) {
            ++pruned_;
          } else {
            ++frontier_;
            out.note_frontier(lb);
          }
          continue;
        }
        Collected right = collect(b, index_budget(budget / *pa));
        if (right.frontier_lb) {
          Nat lb = *pa * prime_lower(*right.frontier_lb);
          if (lb <= budget) out.note_frontier(lb);
        }
        for (const Candidate& B : right.found) {
          if (a == b && B.matula < A.matula) continue;
          auto pb = prime_exact(B.matula);
          if (!pb) {
            Nat lb = *pa * prime_lower(B.matula);
            if (lb > budget) {
              ++pruned_;
            } else {
              ++frontier_;
              out.note_frontier(lb);
            }
            continue;
          }
          ++examined_;
          Nat m = *pa * *pb;
          if (m <= budget) {
            out.found.push_back({join({A.tree, B.tree}), std::move(m)});
          } else {
            ++pruned_;
          }
        }
      }
    }
    return out;
  }

  PrimeOracle& oracle_;
  MatulaEncoder encoder_;
  std::vector<std::optional<Nat>> slot_bounds_;
  std::uint64_t examined_ = 0;
  std::uint64_t pruned_ = 0;
  std::uint64_t frontier_ = 0;
};

inline SearchReport min_binary_bnb(std::uint64_t k, PrimeOracle& oracle) { return BinaryMinSearch(oracle).run(k); }

}  // namespace matula
