#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kanset {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: group specs, complex documents, bad arguments.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A complex or map that is well-formed but violates the simplicial identities.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An enumeration grew past its configured budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(int dim, std::size_t count, const std::string& what)
      : Error(what + ": budget exceeded at dimension " + std::to_string(dim) + " after " +
              std::to_string(count) + " items"),
        dim_(dim),
        count_(count) {}

  int dim() const noexcept { return dim_; }
  std::size_t count() const noexcept { return count_; }

 private:
  int dim_;
  std::size_t count_;
};

/// A question whose answer lives above the truncation cap.
class CapTooSmall : public Error {
 public:
  using Error::Error;
};

/// An operation's mathematical precondition does not hold (e.g. no product
/// found while building a homotopy group of a non-Kan complex).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace kanset
