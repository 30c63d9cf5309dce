#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "raf/rational.hpp"

namespace raf {

/// Positive, strictly increasing rescaling f used by scaled kernels:
/// identity f(x)=x, power f(x)=x^r (0<r<=1), exp_plus_one f(x)=q^x+1 (q>=2).
class FSpec {
 public:
  enum class Kind { identity, power, exp_plus_one };

  static FSpec identity() { return FSpec(Kind::identity, 1.0, 0); }
  static FSpec power(double r);
  static FSpec exp_plus_one(int q);

  Kind kind() const noexcept { return kind_; }
  double exponent() const noexcept { return r_; }
  int base() const noexcept { return q_; }

  /// f(x) for x >= 0; f(0) is 0 for identity/power and 2 for exp_plus_one.
  double value(double x) const;
  /// ln f(n) for n >= 1, computed without overflow.
  double log_value(std::int64_t n) const;
  /// Φ(f(k)/f(n)) with the floor taken exactly where the structure allows.
  double ingham_at(std::int64_t n, std::int64_t k) const;

  std::string spec() const;

  friend bool operator==(const FSpec&, const FSpec&) = default;

 private:
  FSpec(Kind kind, double r, int q) : kind_(kind), r_(r), q_(q) {}
  Kind kind_;
  double r_;
  int q_;
};

class Kernel;

namespace kernels {
struct Ingham {};
struct Affine {
  double lambda;
};
struct Log {
  double lambda;
};
struct Disc {
  double lambda;
};
struct RationalRaf {
  double x;
  double y;
};
/// Weights u_1..u_P, repeated with period P.
struct GeneralizedIngham {
  std::vector<double> weights;
  double weight(std::int64_t j) const { return weights[static_cast<std::size_t>((j - 1) % static_cast<std::int64_t>(weights.size()))]; }
};
struct Scaled {
  std::shared_ptr<const Kernel> base;
  FSpec f;
};
}  // namespace kernels

enum class KernelKind { ingham, affine, log, disc, rational_raf, generalized_ingham, scaled };

/// Two-index weight G(n,k), 1 <= k <= n. Immutable value type.
class Kernel {
 public:
  using Variant = std::variant<kernels::Ingham, kernels::Affine, kernels::Log, kernels::Disc,
                               kernels::RationalRaf, kernels::GeneralizedIngham, kernels::Scaled>;

  static Kernel ingham() { return Kernel(kernels::Ingham{}); }
  static Kernel affine(double lambda);
  static Kernel log(double lambda);
  static Kernel disc(double lambda);
  static Kernel rational_raf(double x, double y);
  static Kernel generalized_ingham(std::vector<double> weights);
  static Kernel scaled(const Kernel& base, FSpec f);

  KernelKind kind() const noexcept { return static_cast<KernelKind>(v_.index()); }
  const Variant& variant() const noexcept { return v_; }

  /// True when G(n,k) = g(k/n) for a one-variable profile g.
  bool is_fgv() const noexcept;
  /// disc with non-integer λ: the index claim for it is not proven.
  bool index_unproven() const noexcept;

  /// g(x) on (0,1] for FGV kernels, floors taken in floating point.
  double profile(double x) const;

  /// Canonical CLI spelling, e.g. "affine:0.5" or "scaled:ingham:exp:2".
  std::string spec() const;

 private:
  explicit Kernel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Parses the CLI kernel grammar; throws FormatError with grammar help.
Kernel parse_kernel(std::string_view text);
FSpec parse_fspec(std::string_view text);

/// Grammar summary for usage messages.
std::string_view kernel_grammar();

double eval(const Kernel& kernel, std::int64_t n, std::int64_t k);

/// k·⌊n/k⌋/n exactly; only the Ingham kernel has an exact form.
Rational eval_exact(const Kernel& kernel, std::int64_t n, std::int64_t k);

/// Fills whole rows G(n,1..n) with per-kernel tables precomputed up to max_n.
class RowEvaluator {
 public:
  RowEvaluator(const Kernel& kernel, std::int64_t max_n);
  void fill(std::int64_t n, std::span<double> out) const;
  std::int64_t max_n() const noexcept { return max_n_; }

 private:
  Kernel kernel_;
  std::int64_t max_n_;
  std::vector<double> table_;  // ln k, ln f(k), or the generalized Ingham H(m)
};

// Integer helpers shared with the combinatorics module.
std::int64_t integer_root(std::int64_t n, int p);
/// Largest j with k·base^j <= n.
int floor_log_ratio(std::int64_t n, std::int64_t k, std::int64_t base);

}  // namespace raf
