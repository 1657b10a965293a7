#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace matula {

/// Arbitrary-precision natural number. Matula numbers outgrow 64 bits
/// quickly (M(K_{1,n}) = 2^n), so every value in the codomain of the map
/// uses this type.
using Nat = boost::multiprecision::cpp_int;

inline std::string to_string(const Nat& n) { return n.str(); }

/// The value as a machine word, or nullopt when it does not fit.
inline std::optional<std::uint64_t> to_u64(const Nat& n) {
  if (n < 0 || n > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(n);
}

/// Parses an unsigned decimal string. Returns nullopt on anything else.
inline std::optional<Nat> parse_nat(std::string_view s) {
  if (s.empty()) return std::nullopt;
  Nat value = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    value *= 10;
    value += c - '0';
  }
  return value;
}

inline Nat pow2(unsigned n) {
  Nat v = 1;
  v <<= n;
  return v;
}

}  // namespace matula
