#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdd {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad size, bad parameter).
class InvalidArgument : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Malformed or inconsistent input file.
class ParseError : public Error {
public:
  using Error::Error;
};

/// A factorization met a zero or negative pivot.
class SingularMatrix : public Error {
public:
  SingularMatrix(const std::string& what, std::size_t pivot)
      : Error(what + " (pivot " + std::to_string(pivot) + ")"), pivot_(pivot) {}

  std::size_t pivot() const noexcept { return pivot_; }

private:
  std::size_t pivot_;
};

/// Something that cannot happen for valid inputs did happen.
class NumericalFailure : public Error {
public:
  using Error::Error;
};

}  // namespace sdd
