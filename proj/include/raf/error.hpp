#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace raf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An index or size exceeds the range covered by a precomputed table.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A request would exceed a configured memory or size budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Brute-force oracle refused an oversize request.
class CostLimitError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a pole of a meromorphic function.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// G(n,n) vanished during forward substitution.
class SingularKernelError : public Error {
 public:
  SingularKernelError(std::int64_t n)
      : Error("singular kernel: G(n,n) = 0 at n = " + std::to_string(n)), n_(n) {}
  std::int64_t index() const noexcept { return n_; }

 private:
  std::int64_t n_;
};

/// Exact backend requested for a right-hand side that is not rational.
class BackendMismatchError : public Error {
 public:
  using Error::Error;
};

class DegenerateSeriesError : public Error {
 public:
  using Error::Error;
};

/// Index estimation could not bracket a transition on the supplied grid.
class BracketError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace raf
