#pragma once

#include "error.hpp"
#include "nat.hpp"
#include "prime_oracle.hpp"
#include "tree.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace matula {

/// Tree -> Matula number, M(K_1) = 1 and M(T) = p_{M(T_1)} ... p_{M(T_r)}.
///
/// Results are memoized per isomorphism class of subtree, so an encoder
/// reused across many trees (an enumeration stream, a search) never
/// evaluates the same subtree twice. Not thread-safe; give each worker its
/// own encoder over a shared oracle.
class MatulaEncoder {
 public:
  explicit MatulaEncoder(PrimeOracle& oracle) : oracle_(oracle) {}

  Nat encode(const Tree& t) {
    if (t.is_leaf()) return 1;
    if (auto it = memo_.find(t); it != memo_.end()) return it->second;
    Nat product = 1;
    for (const Tree& child : t.children()) product *= prime_for(encode(child));
    memo_.emplace(t, product);
    return product;
  }

  /// p_{M}, where M is the Matula number of some subtree.
  Nat prime_for(const Nat& index) {
    auto m = to_u64(index);
    if (!m) throw IndexOutOfRange(index, "needed for a subtree with Matula number " + index.str());
    try {
      return oracle_.nth_prime(*m);
    } catch (IndexOutOfRange& e) {
      e.add_context("needed for a subtree with Matula number " + index.str());
      throw;
    }
  }

  PrimeOracle& oracle() { return oracle_; }

 private:
  PrimeOracle& oracle_;
  std::unordered_map<Tree, Nat, TreeHash> memo_;
};

/// Matula number -> Tree, through the prime decomposition n = t_1 ... t_l
/// and t_i = p_{m_i}: the root gets one branch decode(m_i) per factor.
class MatulaDecoder {
 public:
  explicit MatulaDecoder(PrimeOracle& oracle) : oracle_(oracle) {}

  Tree decode(const Nat& n) {
    if (n < 1) throw DomainError("Matula numbers start at 1, got " + n.str());
    if (n == 1) return leaf();
    auto small = to_u64(n);
    if (small) {
      if (auto it = memo_.find(*small); it != memo_.end()) return it->second;
    }
    try {
      std::vector<Tree> branches;
      for (const PrimePower& f : oracle_.factorize(n)) {
        Tree branch = decode(Nat(oracle_.prime_index(f.prime)));
        branches.insert(branches.end(), f.exponent, branch);
      }
      Tree t = join(std::move(branches));
      if (small) memo_.emplace(*small, t);
      return t;
    } catch (Error& e) {
      e.add_context("decoding " + n.str());
      throw;
    }
  }

 private:
  PrimeOracle& oracle_;
  std::unordered_map<std::uint64_t, Tree> memo_;
};

inline Nat encode(const Tree& t, PrimeOracle& oracle) { return MatulaEncoder(oracle).encode(t); }

inline Tree decode(const Nat& n, PrimeOracle& oracle) { return MatulaDecoder(oracle).decode(n); }

}  // namespace matula
