#pragma once

#include "nat.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matula {

/// Root of the library's exception hierarchy. The message can be extended
/// with context while the exception propagates (decode attaches the
/// recursion path this way).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what), message_(what) {}

  const char* what() const noexcept override { return message_.c_str(); }

  void add_context(const std::string& context) { message_ += " [" + context + "]"; }

 private:
  std::string message_;
};

/// Bad argument for an operation's precondition (bad size, m < 2, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The request needs primes beyond the oracle's configured ceiling.
class RangeError : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public RangeError {
 public:
  explicit IndexOutOfRange(Nat index, const std::string& detail = {})
      : RangeError("prime index " + index.str() + " is beyond the prime bound" +
                   (detail.empty() ? "" : ": " + detail)),
        index_(std::move(index)) {}

  const Nat& index() const { return index_; }

 private:
  Nat index_;
};

class ValueOutOfRange : public RangeError {
 public:
  explicit ValueOutOfRange(Nat value)
      : RangeError("value " + value.str() + " is beyond the prime bound"), value_(std::move(value)) {}

  const Nat& value() const { return value_; }

 private:
  Nat value_;
};

class FactorOutOfRange : public RangeError {
 public:
  explicit FactorOutOfRange(Nat cofactor)
      : RangeError("cofactor " + cofactor.str() + " has no prime factor within the prime bound"),
        cofactor_(std::move(cofactor)) {}

  const Nat& cofactor() const { return cofactor_; }

 private:
  Nat cofactor_;
};

class NotPrime : public DomainError {
 public:
  explicit NotPrime(const Nat& n) : DomainError(n.str() + " is not prime") {}
};

class TooFewBranches : public DomainError {
 public:
  explicit TooFewBranches(std::size_t r)
      : DomainError("transformation needs at least 3 branches, got " + std::to_string(r)) {}
};

class BadSize : public DomainError {
 public:
  using DomainError::DomainError;
};

class SizeTooLarge : public RangeError {
 public:
  using RangeError::RangeError;
};

/// Malformed tree text. offset is the byte position of the offending
/// character; expected lists the tokens that would have been accepted.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected)
      : Error(format(offset, expected)), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t offset, const std::vector<std::string>& expected) {
    std::string s = "syntax error at offset " + std::to_string(offset) + ": expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) s += " or ";
      s += expected[i];
    }
    return s;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

}  // namespace matula
