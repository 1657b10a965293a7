#include "oracles.hpp"

#include <matula/extremal.hpp>
#include <matula/tree_text.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>
#include <utility>

namespace matula {
namespace {

PrimeOracle& shared_oracle() {
  static PrimeOracle oracle;
  return oracle;
}

std::vector<Nat> nats(std::initializer_list<const char*> xs) {
  std::vector<Nat> out;
  for (const char* x : xs) out.emplace_back(x);
  return out;
}

// Frozen from an independent sympy computation.
const std::vector<Nat> kQ = nats({"1", "4", "14", "86", "886", "13766", "298154", "8455786", "300427382"});
const std::vector<Nat> kL =
    nats({"1", "4", "14", "49", "301", "1589", "9761", "51529", "452411", "3041573", "23140153", "143573641",
          "1260538619", "8474639717", "64474684537", "400034745289", "4186467592817", "32078140605053"});

TEST(QSeq, Values) {
  EXPECT_EQ(q_seq(1, shared_oracle()), std::vector<Nat>{1});
  const auto q = q_seq(8, shared_oracle());
  EXPECT_EQ(q, std::vector<Nat>(kQ.begin(), kQ.begin() + 8));
  EXPECT_THROW(q_seq(0, shared_oracle()), BadSize);
}

TEST(QSeq, MatchesCaterpillars) {
  MatulaEncoder enc(shared_oracle());
  const auto q = q_seq(8, shared_oracle());
  for (std::uint64_t k = 1; k <= 8; ++k) EXPECT_EQ(enc.encode(binary_caterpillar(k)), q[k - 1]);
}

TEST(QSeq, InfeasibleIndexIsReported) {
  PrimeOracle small(100000);
  try {
    q_seq(7, small);
    FAIL() << "expected IndexOutOfRange";
  } catch (const IndexOutOfRange& e) {
    EXPECT_EQ(e.index(), 13766);
    EXPECT_NE(std::string(e.what()).find("k = 7"), std::string::npos) << e.what();
  }
}

TEST(LSeq, Values) {
  const auto l = l_seq(18, shared_oracle());
  EXPECT_EQ(l, kL);
  EXPECT_EQ(l[3], 49);  // p_{l_2}^2 = 7^2
}

TEST(LSeq, MatchesMinimalTrees) {
  MatulaEncoder enc(shared_oracle());
  const auto l = l_seq(14, shared_oracle());
  for (std::uint64_t k = 1; k <= 14; ++k) {
    const Tree s = min_binary_tree(k);
    EXPECT_EQ(s.leaves(), k);
    EXPECT_TRUE(classify(s).binary);
    EXPECT_EQ(enc.encode(s), l[k - 1]) << k;
  }
}

using Split = std::pair<std::uint64_t, std::uint64_t>;

TEST(MinBinarySplit, Cases) {
  EXPECT_EQ(min_binary_split(2), Split(1, 1));
  EXPECT_EQ(min_binary_split(4), Split(2, 2));
  EXPECT_EQ(min_binary_split(6), Split(2, 4));
  EXPECT_EQ(min_binary_split(13), Split(5, 8));
  EXPECT_EQ(min_binary_split(18), Split(8, 10));
  for (std::uint64_t k = 2; k <= 4096; ++k) {
    auto [a, b] = min_binary_split(k);
    EXPECT_EQ(a + b, k);
    EXPECT_GE(a, 1u);
    EXPECT_GE(b, 1u);
  }
  EXPECT_THROW(min_binary_split(1), BadSize);
}

TEST(MinBinaryTree, Shapes) {
  EXPECT_EQ(min_binary_tree(1), leaf());
  EXPECT_EQ(min_binary_tree(6), join({min_binary_tree(2), min_binary_tree(4)}));
  EXPECT_EQ(min_binary_tree(13), join({min_binary_tree(5), min_binary_tree(8)}));
  EXPECT_EQ(min_binary_tree(8).height(), 3u);
  EXPECT_THROW(min_binary_tree(0), BadSize);
}

TEST(GiMaxTree, Values) {
  EXPECT_EQ(encode(gi_max_tree(5), shared_oracle()), 19);
  EXPECT_EQ(encode(gi_max_tree(6), shared_oracle()), 67);
  EXPECT_EQ(gi_max_tree(9).vertices(), 9u);
  EXPECT_EQ(gi_max_tree(9).leaves(), 3u);
  EXPECT_THROW(gi_max_tree(4), BadSize);
}

TEST(Lemma1, TableValues) {
  const auto rows = check_lemma1(9, shared_oracle());
  std::vector<Nat> table;
  for (const LemmaInstance& r : rows) {
    EXPECT_TRUE(r.holds) << r.k1 << "," << r.k2;
    EXPECT_EQ(r.rhs, kQ[r.k1 + r.k2 - 1]);
    if (r.k1 + r.k2 >= 4 && r.k1 + r.k2 <= 6) table.push_back(r.lhs);
  }
  EXPECT_EQ(table, nats({"86", "49", "886", "301", "13766", "3101", "1849"}));
  // Ordered by k1 + k2, then k1: sums 2..9 give 1+1+2+2+3+3+4+4 pairs.
  EXPECT_EQ(rows.size(), 20u);
  EXPECT_EQ(rows[2].k1, 1u);
  EXPECT_EQ(rows[2].k2, 3u);
  EXPECT_TRUE(rows[2].equality);
  for (const LemmaInstance& r : rows) EXPECT_EQ(r.equality, r.k1 == 1) << r.k1 << "," << r.k2;
}

TEST(Exhaustive, TopologicalExamples) {
  auto& o = shared_oracle();
  const auto m4 = exhaustive_max({TreeClass::topological, SizeKind::leaves, 4}, o);
  EXPECT_EQ(m4.optimum, Nat(86));
  EXPECT_EQ(m4.witness, binary_caterpillar(4));
  EXPECT_TRUE(m4.exhaustive);
  EXPECT_EQ(m4.examined, 5u);

  const auto m6 = exhaustive_max({TreeClass::topological, SizeKind::leaves, 6}, o);
  EXPECT_EQ(m6.optimum, Nat(13766));
  EXPECT_EQ(m6.witness, binary_caterpillar(6));

  const auto n6 = exhaustive_min({TreeClass::topological, SizeKind::leaves, 6}, o);
  EXPECT_EQ(n6.optimum, Nat(64));
  EXPECT_EQ(n6.witness, star(6));

  EXPECT_EQ(exhaustive_min({TreeClass::topological, SizeKind::leaves, 2}, o).optimum, Nat(4));
}

TEST(Exhaustive, ExtremesForAllLeafCounts) {
  auto& o = shared_oracle();
  for (std::uint64_t n = 2; n <= 8; ++n) {
    const auto hi = exhaustive_max({TreeClass::topological, SizeKind::leaves, n}, o);
    const auto lo = exhaustive_min({TreeClass::topological, SizeKind::leaves, n}, o);
    EXPECT_EQ(hi.optimum, kQ[n - 1]);
    EXPECT_EQ(hi.witness, binary_caterpillar(n));
    EXPECT_EQ(lo.optimum, pow2(n));
    EXPECT_EQ(lo.witness, star(n));
  }
}

TEST(Exhaustive, RootedFiveVertices) {
  auto& o = shared_oracle();
  const auto hi = exhaustive_max({TreeClass::rooted, SizeKind::vertices, 5}, o);
  EXPECT_EQ(hi.optimum, Nat(19));
  EXPECT_EQ(hi.witness, gi_max_tree(5));
  EXPECT_EQ(hi.examined, 9u);

  // Brute force over decoded numbers: the smallest Matula number whose tree
  // has five vertices.
  MatulaDecoder dec(o);
  std::uint64_t first = 0;
  for (std::uint64_t m = 1; first == 0; ++m) {
    if (dec.decode(m).vertices() == 5) first = m;
  }
  const auto lo = exhaustive_min({TreeClass::rooted, SizeKind::vertices, 5}, o);
  EXPECT_EQ(lo.optimum, Nat(first));
  EXPECT_EQ(first, 9u);
}

TEST(Exhaustive, GiMaximumIsUnique) {
  auto& o = shared_oracle();
  MatulaEncoder enc(o);
  for (std::uint64_t n = 5; n <= 10; ++n) {
    const auto trees = enumerate({TreeClass::rooted, SizeKind::vertices, n});
    const Nat target = enc.encode(gi_max_tree(n));
    int hits = 0;
    for (const Tree& t : trees) {
      const Nat m = enc.encode(t);
      EXPECT_LE(m, target);
      if (m == target) ++hits;
    }
    EXPECT_EQ(hits, 1) << n;
    EXPECT_EQ(exhaustive_max({TreeClass::rooted, SizeKind::vertices, n}, o).witness, gi_max_tree(n));
  }
}

TEST(Exhaustive, RangeErrorsPropagate) {
  PrimeOracle small(1000);
  EXPECT_THROW(exhaustive_max({TreeClass::topological, SizeKind::leaves, 6}, small), IndexOutOfRange);
  EXPECT_THROW(exhaustive_max({TreeClass::topological, SizeKind::leaves, 13}, small), SizeTooLarge);
}

// Minimum over binary trees with k leaves from the recursion
// min_k = min over a + b = k of p_{min_a} p_{min_b}, which is valid because
// p_x p_y grows in both arguments. Primes from the plain sieve.
std::vector<std::uint64_t> binary_minimum_dp(std::uint64_t k_max, const std::vector<std::uint64_t>& primes) {
  std::vector<std::uint64_t> best(k_max + 1, 0);
  best[1] = 1;
  for (std::uint64_t k = 2; k <= k_max; ++k) {
    for (std::uint64_t a = 1; 2 * a <= k; ++a) {
      const std::uint64_t v = primes.at(best[a] - 1) * primes.at(best[k - a] - 1);
      if (best[k] == 0 || v < best[k]) best[k] = v;
    }
  }
  return best;
}

TEST(BranchAndBound, MatchesIndependentMinimum) {
  const auto primes = testing::simple_primes(60'000'000);
  const auto dp = binary_minimum_dp(11, primes);
  for (std::uint64_t k = 1; k <= 11; ++k) {
    EXPECT_EQ(Nat(dp[k]), kL[k - 1]) << k;
    const SearchReport r = min_binary_bnb(k, shared_oracle());
    ASSERT_TRUE(r.optimum) << k;
    EXPECT_EQ(*r.optimum, kL[k - 1]) << k;
    EXPECT_EQ(r.witness, min_binary_tree(k)) << k;
    EXPECT_TRUE(r.exhaustive) << k;
  }
}

TEST(BranchAndBound, AgreesWithFullEnumeration) {
  // All binary trees with k <= 8 leaves encoded with plain-sieve primes.
  const auto primes = testing::simple_primes(5'000'000);
  std::function<std::uint64_t(const Tree&)> m = [&](const Tree& t) -> std::uint64_t {
    std::uint64_t v = 1;
    for (const Tree& c : t.children()) v *= primes.at(m(c) - 1);
    return v;
  };
  for (std::uint64_t k = 1; k <= 8; ++k) {
    std::uint64_t lo = UINT64_MAX;
    for (const Tree& t : enumerate({TreeClass::binary, SizeKind::leaves, k})) lo = std::min(lo, m(t));
    EXPECT_EQ(*min_binary_bnb(k, shared_oracle()).optimum, lo) << k;
  }
}

TEST(BranchAndBound, Examples) {
  const SearchReport two = min_binary_bnb(2, shared_oracle());
  EXPECT_EQ(two.optimum, Nat(4));
  EXPECT_EQ(two.examined, 1u);
  EXPECT_TRUE(two.exhaustive);

  const SearchReport six = min_binary_bnb(6, shared_oracle());
  EXPECT_EQ(six.optimum, Nat(1589));
  EXPECT_EQ(six.witness, join({min_binary_tree(2), min_binary_tree(4)}));
  EXPECT_TRUE(six.exhaustive);

  const SearchReport twelve = min_binary_bnb(12, shared_oracle());
  EXPECT_EQ(twelve.optimum, kL[11]);
  EXPECT_TRUE(twelve.exhaustive);
  EXPECT_THROW(min_binary_bnb(0, shared_oracle()), BadSize);
}

TEST(BranchAndBound, SmallOracleStaysHonest) {
  // S_9 needs p_301 = 1993, beyond a bound of 1000: the search cannot even
  // evaluate its incumbent and must not claim a certificate.
  PrimeOracle small(1000);
  const SearchReport r = min_binary_bnb(9, small);
  EXPECT_FALSE(r.exhaustive);
  if (r.optimum) {
    EXPECT_LE(*r.optimum, kL[8]);
  }
  // Primes to 10^4 are enough for k = 9: the budget never asks for more.
  PrimeOracle medium(10000);
  const SearchReport nine = min_binary_bnb(9, medium);
  EXPECT_EQ(nine.optimum, kL[8]);
  EXPECT_TRUE(nine.exhaustive);
  const SearchReport ok = min_binary_bnb(5, small);
  EXPECT_EQ(ok.optimum, Nat(301));
  EXPECT_TRUE(ok.exhaustive);
}

}  // namespace
}  // namespace matula
