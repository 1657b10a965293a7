#pragma once

#include "error.hpp"
#include "nat.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

namespace matula {

/// Lower bound p_m >= m (ln m + ln ln m - 1.0072629), valid for m >= 2.
inline double robin_lower(std::uint64_t m) {
  if (m < 2) throw DomainError("robin_lower needs m >= 2, got " + std::to_string(m));
  const double x = static_cast<double>(m);
  return x * (std::log(x) + std::log(std::log(x)) - 1.0072629);
}

/// Upper bound p_m <= m (ln m + ln ln m - 0.5), valid for m >= 20.
inline double rosser_schoenfeld_upper(std::uint64_t m) {
  if (m < 20) throw DomainError("rosser_schoenfeld_upper needs m >= 20, got " + std::to_string(m));
  const double x = static_cast<double>(m);
  return x * (std::log(x) + std::log(std::log(x)) - 0.5);
}

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the first twelve prime bases are exact for
/// every 64-bit input.
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : bases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : bases) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Sieve-backed answers to p_m, the inverse index, pi(x) and factorization,
/// for primes up to a configured ceiling.
///
/// The tables grow lazily with a segmented sieve of Eratosthenes over odd
/// numbers only (one bit per odd number). Queries are thread-safe; table
/// extension takes an exclusive lock.
class PrimeOracle {
 public:
  static constexpr std::uint64_t kDefaultBound = std::uint64_t{1} << 32;

  explicit PrimeOracle(std::uint64_t limit_value = kDefaultBound) : limit_value_(limit_value) {
    if (limit_value_ < 2) throw DomainError("prime bound must be at least 2");
    if (limit_value_ > (std::uint64_t{1} << 62)) throw DomainError("prime bound must not exceed 2^62");
    init_base_primes();
  }

  PrimeOracle(const PrimeOracle&) = delete;
  PrimeOracle& operator=(const PrimeOracle&) = delete;

  /// Reads MATULA_PRIME_BOUND, falling back to 2^32.
  static std::uint64_t bound_from_env() {
    const char* env = std::getenv("MATULA_PRIME_BOUND");
    if (!env || !*env) return kDefaultBound;
    auto v = parse_nat(env);
    if (!v || *v < 2) throw DomainError(std::string("MATULA_PRIME_BOUND must be a decimal >= 2, got '") + env + "'");
    auto u = to_u64(*v);
    if (!u) throw DomainError("MATULA_PRIME_BOUND does not fit in 64 bits");
    return *u;
  }

  std::uint64_t limit_value() const { return limit_value_; }

  /// pi(limit_value). Sieves all the way up to the ceiling.
  std::uint64_t limit_index() { return prime_count(limit_value_); }

  /// Largest number the tables currently cover (exclusive).
  std::uint64_t sieved_to() const {
    std::shared_lock lock(mutex_);
    return sieved_to_;
  }

  std::uint64_t nth_prime(std::uint64_t m) {
    if (m == 0) throw DomainError("prime index must be at least 1");
    if (m == 1) return 2;
    if (robin_lower(m) > static_cast<double>(limit_value_) * (1.0 + 1e-12) + 1.0) {
      throw IndexOutOfRange(m, "p_m exceeds " + std::to_string(limit_value_));
    }
    const std::uint64_t odd_rank = m - 1;
    std::uint64_t target = m < 20 ? 80 : static_cast<std::uint64_t>(std::ceil(rosser_schoenfeld_upper(m))) + 2;
    for (;;) {
      {
        std::shared_lock lock(mutex_);
        if (chunk_prefix_.back() >= odd_rank) {
          const std::uint64_t p = select_odd(odd_rank);
          if (p > limit_value_) throw IndexOutOfRange(m, "p_m exceeds " + std::to_string(limit_value_));
          return p;
        }
        if (sieved_to_ > limit_value_) {
          throw IndexOutOfRange(m, "only " + std::to_string(count_le(limit_value_)) + " primes up to " +
                                       std::to_string(limit_value_));
        }
      }
      ensure(std::min(target, limit_value_));
      target = target > limit_value_ / 2 ? limit_value_ : target * 2;
    }
  }

  std::uint64_t prime_index(std::uint64_t p) {
    if (p > limit_value_) throw ValueOutOfRange(p);
    if (p < 2) throw NotPrime(p);
    if (p == 2) return 1;
    if (p % 2 == 0) throw NotPrime(p);
    ensure(p);
    std::shared_lock lock(mutex_);
    if (!test_odd(p)) throw NotPrime(p);
    return count_le(p);
  }

  /// pi(x), the number of primes <= x.
  std::uint64_t prime_count(std::uint64_t x) {
    if (x > limit_value_) throw ValueOutOfRange(x);
    if (x < 2) return 0;
    ensure(x);
    std::shared_lock lock(mutex_);
    return count_le(x);
  }

  bool is_prime(std::uint64_t n) {
    if (n > limit_value_) throw ValueOutOfRange(n);
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    ensure(n);
    std::shared_lock lock(mutex_);
    return test_odd(n);
  }

  /// Calls fn(p) for every prime p <= hi in ascending order until fn
  /// returns false.
  template <typename Fn>
  void for_each_prime(std::uint64_t hi, Fn&& fn) {
    if (hi > limit_value_) throw ValueOutOfRange(hi);
    if (hi < 2) return;
    if (!fn(std::uint64_t{2})) return;
    // The sieve grows one slice at a time, so an early stop never pays for
    // primes up to hi. Words are copied out so fn may query the oracle.
    std::vector<std::uint64_t> words;
    const std::uint64_t last_word = hi / 128;
    for (std::uint64_t w0 = 0; w0 <= last_word;) {
      const std::uint64_t w1 = std::min(last_word, w0 + std::max<std::uint64_t>(w0, 1u << 14));
      ensure(std::min(hi, 128 * w1 + 127));
      {
        std::shared_lock lock(mutex_);
        words.assign(bits_.begin() + static_cast<std::ptrdiff_t>(w0), bits_.begin() + static_cast<std::ptrdiff_t>(w1 + 1));
      }
      for (std::uint64_t i = 0; i < words.size(); ++i) {
        std::uint64_t bits = words[i];
        while (bits) {
          const std::uint64_t p = 128 * (w0 + i) + 2 * static_cast<std::uint64_t>(std::countr_zero(bits)) + 1;
          if (p > hi) return;
          if (!fn(p)) return;
          bits &= bits - 1;
        }
      }
      w0 = w1 + 1;
    }
  }

  /// Prime decomposition of n >= 2 with strictly increasing primes.
  std::vector<PrimePower> factorize(const Nat& n) {
    if (n < 2) throw DomainError("factorize needs n >= 2, got " + n.str());
    std::vector<PrimePower> out;
    Nat cofactor = n;

    auto certified_prime_cofactor = [&]() {
      auto c = to_u64(cofactor);
      return c && *c <= limit_value_ && is_prime_u64(*c);
    };
    if (certified_prime_cofactor()) {
      out.push_back({*to_u64(cofactor), 1});
      return out;
    }

    const Nat root = boost::multiprecision::sqrt(n);
    const std::uint64_t trial_hi = root > limit_value_ ? limit_value_ : static_cast<std::uint64_t>(root);

    for_each_prime(trial_hi, [&](std::uint64_t p) {
      if (Nat(p) * p > cofactor) return false;
      unsigned e = 0;
      if (auto c = to_u64(cofactor)) {
        std::uint64_t v = *c;
        while (v % p == 0) {
          v /= p;
          ++e;
        }
        cofactor = v;
      } else {
        while (cofactor % p == 0) {
          cofactor /= p;
          ++e;
        }
      }
      if (e == 0) return true;
      out.push_back({p, e});
      if (cofactor == 1) return false;
      if (certified_prime_cofactor()) {
        out.push_back({*to_u64(cofactor), 1});
        cofactor = 1;
        return false;
      }
      return true;
    });

    if (cofactor == 1) return out;
    // Every prime <= sqrt(cofactor) was tried iff the trial range reached it.
    const bool proven_prime = boost::multiprecision::sqrt(cofactor) <= trial_hi;
    if (!proven_prime || cofactor > limit_value_) throw FactorOutOfRange(cofactor);
    out.push_back({static_cast<std::uint64_t>(cofactor), 1});
    return out;
  }

 private:
  // Word w holds the odd numbers 128w+1, 128w+3, ..., 128w+127.
  static constexpr std::uint64_t kNumbersPerWord = 128;
  static constexpr std::uint64_t kWordsPerChunk = 64;
  static constexpr std::uint64_t kNumbersPerChunk = kNumbersPerWord * kWordsPerChunk;
  static constexpr std::uint64_t kSliceWords = 4096;

  void init_base_primes() {
    const std::uint64_t top = detail::isqrt(limit_value_ + 2 * kNumbersPerChunk) + 1;
    std::vector<bool> composite(top + 1, false);
    for (std::uint64_t i = 3; i * i <= top; i += 2) {
      if (composite[i]) continue;
      for (std::uint64_t j = i * i; j <= top; j += 2 * i) composite[j] = true;
    }
    for (std::uint64_t i = 3; i <= top; i += 2) {
      if (!composite[i]) base_primes_.push_back(static_cast<std::uint32_t>(i));
    }
  }

  // Makes the tables cover every number <= x.
  void ensure(std::uint64_t x) {
    {
      std::shared_lock lock(mutex_);
      if (x < sieved_to_) return;
    }
    std::unique_lock lock(mutex_);
    if (x < sieved_to_) return;
    const std::uint64_t cap = round_up(limit_value_ + 1);
    std::uint64_t want = std::max({x + 1, sieved_to_ + sieved_to_ / 4, std::uint64_t{1} << 16});
    extend(std::min(round_up(want), cap));
  }

  static std::uint64_t round_up(std::uint64_t x) {
    return (x + kNumbersPerChunk - 1) / kNumbersPerChunk * kNumbersPerChunk;
  }

  void extend(std::uint64_t new_end) {
    const std::uint64_t first_word = sieved_to_ / kNumbersPerWord;
    const std::uint64_t end_word = new_end / kNumbersPerWord;
    bits_.resize(end_word, ~std::uint64_t{0});

    for (std::uint64_t lo_word = first_word; lo_word < end_word; lo_word += kSliceWords) {
      const std::uint64_t hi_word = std::min(end_word, lo_word + kSliceWords);
      const std::uint64_t lo = lo_word * kNumbersPerWord;
      const std::uint64_t hi = hi_word * kNumbersPerWord;
      for (std::uint64_t p : base_primes_) {
        if (p * p >= hi) break;
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        if (start % 2 == 0) start += p;
        for (std::uint64_t n = start; n < hi; n += 2 * p) {
          bits_[n / kNumbersPerWord] &= ~(std::uint64_t{1} << ((n % kNumbersPerWord) / 2));
        }
      }
    }
    if (first_word == 0) bits_[0] &= ~std::uint64_t{1};  // 1 is not prime

    for (std::uint64_t c = first_word / kWordsPerChunk; c < end_word / kWordsPerChunk; ++c) {
      std::uint64_t count = 0;
      for (std::uint64_t w = c * kWordsPerChunk; w < (c + 1) * kWordsPerChunk; ++w) {
        count += static_cast<std::uint64_t>(std::popcount(bits_[w]));
      }
      chunk_prefix_.push_back(chunk_prefix_.back() + count);
    }
    sieved_to_ = new_end;
  }

  bool test_odd(std::uint64_t n) const {
    return (bits_[n / kNumbersPerWord] >> ((n % kNumbersPerWord) / 2)) & 1;
  }

  // Number of primes <= x; requires x < sieved_to_.
  std::uint64_t count_le(std::uint64_t x) const {
    if (x < 2) return 0;
    const std::uint64_t w = x / kNumbersPerWord;
    const std::uint64_t nbits = (x % kNumbersPerWord + 1) / 2;
    const std::uint64_t chunk = w / kWordsPerChunk;
    std::uint64_t total = 1 + chunk_prefix_[chunk];
    for (std::uint64_t i = chunk * kWordsPerChunk; i < w; ++i) {
      total += static_cast<std::uint64_t>(std::popcount(bits_[i]));
    }
    const std::uint64_t mask = nbits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nbits) - 1;
    total += static_cast<std::uint64_t>(std::popcount(bits_[w] & mask));
    return total;
  }

  // The rank-th odd prime (1-based); requires chunk_prefix_.back() >= rank.
  std::uint64_t select_odd(std::uint64_t rank) const {
    auto it = std::lower_bound(chunk_prefix_.begin(), chunk_prefix_.end(), rank);
    const std::uint64_t chunk = static_cast<std::uint64_t>(it - chunk_prefix_.begin()) - 1;
    std::uint64_t remaining = rank - chunk_prefix_[chunk];
    for (std::uint64_t w = chunk * kWordsPerChunk;; ++w) {
      std::uint64_t bits = bits_[w];
      const auto pc = static_cast<std::uint64_t>(std::popcount(bits));
      if (remaining > pc) {
        remaining -= pc;
        continue;
      }
      for (std::uint64_t i = 1; i < remaining; ++i) bits &= bits - 1;
      return w * kNumbersPerWord + 2 * static_cast<std::uint64_t>(std::countr_zero(bits)) + 1;
    }
  }

  std::uint64_t limit_value_;
  std::vector<std::uint32_t> base_primes_;

  mutable std::shared_mutex mutex_;
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> chunk_prefix_{0};
  std::uint64_t sieved_to_ = 0;
};

}  // namespace matula
