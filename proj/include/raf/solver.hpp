#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "raf/kernel.hpp"
#include "raf/rational.hpp"
#include "raf/sieve.hpp"

namespace raf {

/// Right-hand side n^{-β}, the delta sequence (1,0,0,...) or n^{-β}·L0(n).
class RhsSpec {
 public:
  enum class Kind { power, delta, power_times_l0 };

  static RhsSpec power(double beta);
  static RhsSpec delta();
  /// `l0` holds L0(0..M) with L0(0) = 0; it must be non-decreasing.
  static RhsSpec power_times_l0(double beta, std::vector<std::int64_t> l0, std::string name = "l0");

  Kind kind() const noexcept { return kind_; }
  double beta() const noexcept { return beta_; }
  /// Largest n the RHS is defined for (unbounded for power and delta).
  std::int64_t limit() const noexcept;

  double value(std::int64_t n) const;
  /// n·RHS(n) - (n-1)·RHS(n-1), evaluated without cancellation.
  double increment(std::int64_t n) const;

  bool is_rational() const noexcept;
  Rational exact_value(std::int64_t n) const;

  /// "power:<β>", "delta" or "l0pow:<β>".
  std::string spec() const;

 private:
  Kind kind_ = Kind::power;
  double beta_ = 0.0;
  std::shared_ptr<const std::vector<std::int64_t>> l0_;
  std::string name_;
};

/// Parses "power:<β>", "delta" or "l0pow:<β>" (3-smooth L0 tabulated to `limit`).
RhsSpec parse_rhs(std::string_view text, std::int64_t limit);

enum class Backend { exact, floating };
std::string_view backend_name(Backend b);
Backend parse_backend(std::string_view text);

/// Solved sequence a_1..a_N. Immutable after construction.
class Coefficients {
 public:
  Coefficients(Kernel kernel, RhsSpec rhs, Backend backend, std::vector<double> values,
               std::vector<Rational> exact = {});

  const Kernel& kernel() const noexcept { return kernel_; }
  const RhsSpec& rhs() const noexcept { return rhs_; }
  Backend backend() const noexcept { return backend_; }
  std::int64_t limit() const noexcept { return static_cast<std::int64_t>(values_.size()); }

  /// a_n as a double (rounded from the exact value on the exact backend).
  double value(std::int64_t n) const;
  double n_a(std::int64_t n) const { return static_cast<double>(n) * value(n); }
  const Rational& exact(std::int64_t n) const;
  Rational exact_n_a(std::int64_t n) const;

  const std::vector<double>& values() const noexcept { return values_; }

 private:
  void check(std::int64_t n) const;
  Kernel kernel_;
  RhsSpec rhs_;
  Backend backend_;
  std::vector<double> values_;
  std::vector<Rational> exact_;
};

struct SolveOptions {
  enum class Method {
    automatic,  // divisor recursion for Ingham, forward substitution otherwise
    direct,     // forward substitution, whatever the kernel
    divisor,    // Ingham only: n·a_n = Σ_{d|n} μ(n/d)·(T(d) - T(d-1)) by recursion
  };
  Method method = Method::automatic;
  /// O(N²) forward substitution refuses larger N.
  std::int64_t generic_cap = 20000;
  /// The Ingham divisor path refuses larger N.
  std::int64_t fast_cap = 10'000'000;
};

/// a_1 = 1 and Σ_{k≤n} a_k G(n,k) = RHS(n) for 2 <= n <= N.
Coefficients solve(const Kernel& kernel, const RhsSpec& rhs, std::int64_t limit, Backend backend,
                   const SolveOptions& options = {});

/// n·a_n for the Ingham kernel and RHS n^{-β}, index 1..N (entry 0 unused).
std::vector<double> ingham_coeff_closed(const MobiusTable& table, double beta, std::int64_t limit);
/// Exact variant for integer β.
std::vector<Rational> ingham_coeff_closed_exact(const MobiusTable& table, std::int64_t beta, std::int64_t limit);

/// n·a_n = μ(n) - [n even]·μ(n/2), index 1..N (entry 0 unused).
std::vector<std::int64_t> delta_coeff_closed(const MobiusTable& table, std::int64_t limit);

struct PartialSumSeries {
  std::vector<std::int64_t> checkpoints;
  std::vector<double> A;   // Σ_{n≤x} a_n
  std::vector<double> A1;  // Σ_{n≤x} n·a_n
  // max |A(y)|, max |A1(y)| over x_{j-1} < y <= x_j; empty for synthetic series.
  std::vector<double> A_peak;
  std::vector<double> A1_peak;
  std::vector<Rational> A_exact;   // exact backend only
  std::vector<Rational> A1_exact;  // exact backend only
  std::string provenance;
};

PartialSumSeries partial_sums(const Coefficients& coeffs, const std::vector<std::int64_t>& checkpoints);

/// L0(n) = #{2^a 3^b <= n} for n = 0..limit.
std::vector<std::int64_t> l0_three_smooth(std::int64_t limit);

struct ResidualReport {
  /// max over 2 <= n <= N of |Σ_k a_k G(n,k) - RHS(n)| / (max(1,|RHS(n)|)·n).
  double max_scaled = 0.0;
  std::int64_t worst_n = 0;
  /// Exact backend: every residual is exactly zero.
  bool exact_zero = false;
};

ResidualReport residual_check(const Coefficients& coeffs);

}  // namespace raf
