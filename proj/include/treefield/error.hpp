#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treefield {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidPoint : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Raised when no point satisfies the three Gromov-product identities of a
/// triple, i.e. the distance function is not a tree metric on that triple.
class MedianError : public Error {
 public:
  using Error::Error;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  NotPSD(std::size_t index, double pivot)
      : Error("matrix is not positive semidefinite: pivot " + std::to_string(pivot) +
              " at index " + std::to_string(index)),
        index_(index),
        pivot_(pivot) {}

  std::size_t index() const noexcept { return index_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::size_t index_;
  double pivot_;
};

/// River plan precondition failures.
class NotLabelled : public Error {
 public:
  using Error::Error;
};

class NotOrdered : public Error {
 public:
  using Error::Error;
};

/// Malformed input files or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace treefield
