#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "raf/kernel.hpp"
#include "raf/mellin.hpp"
#include "raf/sieve.hpp"
#include "raf/solver.hpp"

namespace raf {

/// Geometric grid round(100·1.25^j) <= N, or a linear grid when that gives fewer than 4 points.
std::vector<std::int64_t> default_checkpoints(std::int64_t N);

enum class SeriesField { A, A1 };

struct ExponentFit {
  double slope = 0.0;
  double std_error = 0.0;
};

/// Envelope regression of log|value| on log x over the upper half of the checkpoints.
/// Both the forward running max (growth) and the backward one (decay) are fitted;
/// the steeper of the two is returned.
ExponentFit fit_exponent(const std::vector<std::int64_t>& x, const std::vector<double>& values);
ExponentFit fit_exponent(const PartialSumSeries& series, SeriesField which = SeriesField::A);

/// 0.05 up to |β| = 0.5, 0.1 from |β| = 1, linear in between.
double default_slope_tol(double beta);

struct Tolerances {
  enum class MatchRule {
    tolerance,   // slope and constant both within tolerance
    converging,  // tolerance, or A(x)·x^β/pred drifting towards 1 across the top quartiles
  };
  std::optional<double> slope_tol;
  double const_tol = 0.05;
  MatchRule rule = MatchRule::converging;

  double slope_for(double beta) const { return slope_tol ? *slope_tol : default_slope_tol(beta); }
};

std::string_view match_rule_name(Tolerances::MatchRule rule);
Tolerances::MatchRule parse_match_rule(std::string_view text);

enum class Verdict { asymptotic_match, power_mismatch, bounded_decay };
std::string_view verdict_name(Verdict v);

struct RegimeVerdict {
  double beta = 0.0;
  double fitted_slope = 0.0;
  double slope_stderr = 0.0;
  /// 1/G⋆(β); empty when the transform has a pole or zero at β or is unavailable.
  std::optional<Complex> predicted_constant;
  double empirical_constant = 0.0;
  /// Growth rate of |A(x)·x^β/pred - 1| from the third to the fourth quartile of checkpoints.
  double deviation_trend = 0.0;
  Verdict verdict = Verdict::power_mismatch;
  std::string note;

  /// Whether this point counts as below the index under the given rule.
  bool matches(const Tolerances& tol) const;
};

RegimeVerdict regime_check(const PartialSumSeries& series, double beta, const Kernel& kernel,
                           const Tolerances& tol = {});

/// solve + partial_sums on the default grid + regime_check for RHS n^{-β}.
RegimeVerdict regime_scan(const Kernel& kernel, double beta, std::int64_t N, const Tolerances& tol = {},
                          const SolveOptions& options = {});

struct IndexOptions {
  int bisection_steps = 6;
  bool parallel = true;
  SolveOptions solve;
};

struct IndexEstimate {
  double alpha_hat = 0.0;
  double beta_lo = 0.0;
  double beta_hi = 0.0;
  std::vector<RegimeVerdict> grid;
  std::vector<RegimeVerdict> refinements;
  Tolerances tolerances;
  bool unproven = false;  // kernel's index claim lacks a proof (disc with non-integer λ)
};

IndexEstimate estimate_index(const Kernel& kernel, const std::vector<double>& grid, std::int64_t N,
                             const Tolerances& tol = {}, const IndexOptions& options = {});

struct HLRReport {
  double sup_abs = 0.0;
  std::int64_t sup_at = 0;
  double growth_exponent = 0.0;
  double growth_stderr = 0.0;
  double prime_tail_mean = 0.0;
  std::size_t primes_used = 0;
};

HLRReport hlr_report(const Coefficients& coeffs);

/// Σ_{n≤x} J_{-β}(n) = Σ_{k≤x} k^{-β}·M(⌊x/k⌋).
double jordan_sum(const MobiusTable& table, double beta, std::int64_t x);

struct JordanReport {
  double beta = 0.0;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> sums;
  double fitted_exponent = 0.0;
  double exponent_stderr = 0.0;
  double empirical_constant = 0.0;  // mean of S(x)·x^{β-1} over the top quartile
  double predicted_constant = 0.0;  // 1/((1-β)ζ(1-β))
};

JordanReport jordan_partial_check(const MobiusTable& table, double beta, std::int64_t X);

struct MertensRatio {
  double max_ratio = 0.0;
  std::int64_t argmax = 1;
};

MertensRatio mertens_ratio_report(const MobiusTable& table, std::int64_t X);

}  // namespace raf
