#include "oracles.hpp"

#include <matula/prime_oracle.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

namespace matula {
namespace {

TEST(PrimeOracle, NthPrimeExamples) {
  PrimeOracle oracle;
  EXPECT_EQ(oracle.nth_prime(1), 2u);
  EXPECT_EQ(oracle.nth_prime(2), 3u);
  EXPECT_EQ(oracle.nth_prime(6), 13u);
  EXPECT_EQ(oracle.nth_prime(14), 43u);
  EXPECT_EQ(oracle.nth_prime(86), 443u);
  EXPECT_EQ(oracle.nth_prime(886), 6883u);
  EXPECT_EQ(oracle.nth_prime(20), 71u);
}

TEST(PrimeOracle, NthPrimeZeroIsDomainError) {
  PrimeOracle oracle;
  EXPECT_THROW(oracle.nth_prime(0), DomainError);
}

TEST(PrimeOracle, IndexBeyondBoundThrows) {
  PrimeOracle oracle(100);
  EXPECT_EQ(oracle.limit_index(), 25u);
  EXPECT_EQ(oracle.nth_prime(25), 97u);
  try {
    oracle.nth_prime(26);
    FAIL() << "expected IndexOutOfRange";
  } catch (const IndexOutOfRange& e) {
    EXPECT_EQ(e.index(), 26);
  }
  // Rejected by the analytic lower bound without sieving to the ceiling.
  PrimeOracle big;
  EXPECT_THROW(big.nth_prime(std::uint64_t{1} << 40), IndexOutOfRange);
  EXPECT_LT(big.sieved_to(), std::uint64_t{1} << 20);
}

TEST(PrimeOracle, PrimeIndexExamples) {
  PrimeOracle oracle;
  EXPECT_EQ(oracle.prime_index(43), 14u);
  EXPECT_EQ(oracle.prime_index(2), 1u);
  EXPECT_EQ(oracle.prime_index(6883), 886u);
  EXPECT_THROW(oracle.prime_index(4), NotPrime);
  EXPECT_THROW(oracle.prime_index(1), NotPrime);
  EXPECT_THROW(oracle.prime_index(0), NotPrime);
  EXPECT_THROW(oracle.prime_index(6884), NotPrime);
}

TEST(PrimeOracle, PrimeIndexBeyondBound) {
  PrimeOracle oracle(1000);
  EXPECT_THROW(oracle.prime_index(1009), ValueOutOfRange);
  EXPECT_EQ(oracle.prime_index(997), 168u);
}

TEST(PrimeOracle, AgreesWithPlainSieve) {
  const auto reference = testing::simple_primes(3'000'000);
  PrimeOracle oracle;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    ASSERT_EQ(oracle.nth_prime(i + 1), reference[i]) << "m=" << i + 1;
  }
  // prime_count around chunk boundaries and at random points.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint64_t> pick(0, 3'000'000);
  std::vector<std::uint64_t> xs;
  for (std::uint64_t c = 1; c < 300; ++c) {
    xs.push_back(8192 * c - 1);
    xs.push_back(8192 * c);
    xs.push_back(8192 * c + 1);
  }
  for (int i = 0; i < 2000; ++i) xs.push_back(pick(rng));
  for (std::uint64_t x : xs) {
    const auto expected = std::upper_bound(reference.begin(), reference.end(), x) - reference.begin();
    ASSERT_EQ(oracle.prime_count(x), static_cast<std::uint64_t>(expected)) << "x=" << x;
  }
}

TEST(PrimeOracle, RoundTripAndGrowth) {
  PrimeOracle oracle(1'000'000);
  const std::uint64_t n = oracle.limit_index();
  EXPECT_EQ(n, 78498u);
  std::uint64_t prev = 0;
  for (std::uint64_t m = 1; m <= n; ++m) {
    const std::uint64_t p = oracle.nth_prime(m);
    ASSERT_GT(p, m);
    ASSERT_GT(p, prev);
    ASSERT_EQ(oracle.prime_index(p), m);
    prev = p;
  }
  EXPECT_THROW(oracle.nth_prime(n + 1), IndexOutOfRange);
}

TEST(PrimeOracle, IsPrimeMatchesTrialDivision) {
  PrimeOracle oracle;
  for (std::uint64_t n = 0; n < 20000; ++n) ASSERT_EQ(oracle.is_prime(n), testing::trial_prime(n)) << n;
  for (std::uint64_t n = 0; n < 20000; ++n) ASSERT_EQ(is_prime_u64(n), testing::trial_prime(n)) << n;
  EXPECT_TRUE(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
  EXPECT_FALSE(is_prime_u64(3215031751ull));           // strong pseudoprime to bases 2, 3, 5, 7
}

TEST(PrimeOracle, ForEachPrimeStopsEarly) {
  PrimeOracle oracle;
  std::vector<std::uint64_t> seen;
  oracle.for_each_prime(100, [&](std::uint64_t p) {
    seen.push_back(p);
    return p < 11;
  });
  EXPECT_EQ(seen, (std::vector<std::uint64_t>{2, 3, 5, 7, 11}));
}

TEST(PrimeOracle, ForEachPrimeIsLazyAndReentrant) {
  PrimeOracle oracle;
  std::uint64_t m = 0;
  oracle.for_each_prime(oracle.limit_value(), [&](std::uint64_t p) {
    ++m;
    EXPECT_EQ(oracle.prime_index(p), m);  // queries from inside the callback
    return m < 5000;
  });
  EXPECT_EQ(m, 5000u);
  EXPECT_LT(oracle.sieved_to(), std::uint64_t{1} << 24);
}

TEST(PrimeOracle, FactorizeExamples) {
  PrimeOracle oracle;
  EXPECT_EQ(oracle.factorize(42), (std::vector<PrimePower>{{2, 1}, {3, 1}, {7, 1}}));
  EXPECT_EQ(oracle.factorize(1024), (std::vector<PrimePower>{{2, 10}}));
  // 227 * 227 = 51529 and 227 has no divisor up to 15.
  ASSERT_EQ(227u * 227u, 51529u);
  ASSERT_TRUE(testing::trial_prime(227));
  EXPECT_EQ(oracle.factorize(51529), (std::vector<PrimePower>{{227, 2}}));
  EXPECT_EQ(oracle.factorize(2), (std::vector<PrimePower>{{2, 1}}));
  EXPECT_THROW(oracle.factorize(1), DomainError);
  EXPECT_THROW(oracle.factorize(0), DomainError);
}

TEST(PrimeOracle, FactorizeBigNumbers) {
  PrimeOracle oracle;
  Nat n = pow2(100) * 3 * 3 * 4294967291ull;  // 4294967291 is the largest prime < 2^32
  EXPECT_EQ(oracle.factorize(n), (std::vector<PrimePower>{{2, 100}, {3, 2}, {4294967291ull, 1}}));
}

TEST(PrimeOracle, FactorOutOfRange) {
  PrimeOracle oracle(100);
  EXPECT_THROW(oracle.factorize(2 * 101), FactorOutOfRange);
  EXPECT_THROW(oracle.factorize(101 * 103), FactorOutOfRange);
  EXPECT_THROW(oracle.factorize(101), FactorOutOfRange);
  EXPECT_EQ(oracle.factorize(97 * 89 * 2), (std::vector<PrimePower>{{2, 1}, {89, 1}, {97, 1}}));
}

TEST(PrimeOracle, FactorizeRecomposes) {
  PrimeOracle oracle;
  for (std::uint64_t n = 2; n <= 100000; ++n) {
    Nat product = 1;
    std::uint64_t last = 0;
    for (const PrimePower& f : oracle.factorize(n)) {
      ASSERT_GT(f.prime, last);
      ASSERT_TRUE(testing::trial_prime(f.prime));
      last = f.prime;
      for (unsigned e = 0; e < f.exponent; ++e) product *= f.prime;
    }
    ASSERT_EQ(product, n);
  }
}

TEST(PrimeBounds, RobinValues) {
  EXPECT_NEAR(robin_lower(2), -1.361257280043438, 1e-12);
  EXPECT_NEAR(robin_lower(32078140605053ull) / 1.07555e15, 1.0, 1e-4);
  EXPECT_THROW(robin_lower(1), DomainError);
  EXPECT_THROW(robin_lower(0), DomainError);
}

TEST(PrimeBounds, RosserSchoenfeldValues) {
  EXPECT_NEAR(rosser_schoenfeld_upper(32078140605053ull) / 1.09182e15, 1.0, 1e-4);
  EXPECT_GE(rosser_schoenfeld_upper(20), 71.0);
  EXPECT_THROW(rosser_schoenfeld_upper(19), DomainError);
}

TEST(PrimeBounds, BracketSievedPrimes) {
  PrimeOracle oracle;
  EXPECT_EQ(oracle.nth_prime(1'000'000), 15485863u);
  std::uint64_t m = 0;
  oracle.for_each_prime(15485863, [&](std::uint64_t p) {
    ++m;
    const double v = static_cast<double>(p);
    if (m >= 2) {
      EXPECT_LE(robin_lower(m), v) << m;
    }
    if (m >= 20) {
      EXPECT_LE(v, rosser_schoenfeld_upper(m)) << m;
    }
    return true;
  });
  EXPECT_EQ(m, 1'000'000u);
}

TEST(PrimeOracle, ConcurrentQueries) {
  const auto reference = testing::simple_primes(5'000'000);
  PrimeOracle oracle;
  std::vector<std::jthread> workers;
  std::vector<int> mismatches(8, 0);
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([&, w] {
      std::mt19937_64 rng(w);
      std::uniform_int_distribution<std::size_t> pick(0, reference.size() - 1);
      for (int i = 0; i < 20000; ++i) {
        const std::size_t k = pick(rng);
        if (oracle.nth_prime(k + 1) != reference[k]) ++mismatches[w];
        if (oracle.prime_index(reference[k]) != k + 1) ++mismatches[w];
      }
    });
  }
  workers.clear();
  for (int m : mismatches) EXPECT_EQ(m, 0);
}

TEST(PrimeOracle, BoundFromEnvironment) {
  ::unsetenv("MATULA_PRIME_BOUND");
  EXPECT_EQ(PrimeOracle::bound_from_env(), std::uint64_t{4294967296});
  ::setenv("MATULA_PRIME_BOUND", "1000", 1);
  EXPECT_EQ(PrimeOracle::bound_from_env(), 1000u);
  ::setenv("MATULA_PRIME_BOUND", "12x", 1);
  EXPECT_THROW(PrimeOracle::bound_from_env(), DomainError);
  ::setenv("MATULA_PRIME_BOUND", "1", 1);
  EXPECT_THROW(PrimeOracle::bound_from_env(), DomainError);
  ::unsetenv("MATULA_PRIME_BOUND");
  EXPECT_THROW(PrimeOracle(1), DomainError);
}

}  // namespace
}  // namespace matula
