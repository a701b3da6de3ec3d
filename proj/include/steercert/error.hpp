#pragma once

#include <stdexcept>
#include <string>

namespace steercert {

// Base for every error raised by the library. Callers that only care about
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (d < 2, alpha_i <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Incompatible or oversized dimensions.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Index or index-set out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

// A precondition that the caller was responsible for was violated.
class ContractError : public Error {
 public:
  using Error::Error;
};

// Inverse Fourier transform of an observable produced a non-positive element.
class InvalidObservableError : public Error {
 public:
  using Error::Error;
};

// A rank-one element set turned out to be linearly dependent.
class NotExtremalError : public Error {
 public:
  NotExtremalError(const std::string& what, std::size_t rank, std::size_t expected)
      : Error(what), rank_(rank), expected_(expected) {}
  std::size_t rank() const noexcept { return rank_; }
  std::size_t expected() const noexcept { return expected_; }

 private:
  std::size_t rank_;
  std::size_t expected_;
};

}  // namespace steercert
