#include "raf/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "raf/error.hpp"
#include "raf/summation.hpp"

namespace raf {

namespace {

std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool is_integer(double x) { return std::isfinite(x) && x == std::round(x) && std::abs(x) < 1e15; }

// n^s - (n-1)^s for n >= 2.
double power_step(std::int64_t n, double s) {
  const double nd = static_cast<double>(n);
  return -std::pow(nd, s) * std::expm1(s * std::log1p(-1.0 / nd));
}

}  // namespace

// ---- RhsSpec -------------------------------------------------------------

RhsSpec RhsSpec::power(double beta) {
  if (!std::isfinite(beta)) throw DomainError("power RHS needs a finite beta");
  RhsSpec r;
  r.kind_ = Kind::power;
  r.beta_ = beta;
  return r;
}

RhsSpec RhsSpec::delta() {
  RhsSpec r;
  r.kind_ = Kind::delta;
  r.beta_ = std::numeric_limits<double>::infinity();
  return r;
}

RhsSpec RhsSpec::power_times_l0(double beta, std::vector<std::int64_t> l0, std::string name) {
  if (!std::isfinite(beta)) throw DomainError("L0 RHS needs a finite beta");
  if (l0.size() < 2) throw DomainError("L0 table must cover n = 1");
  if (l0[0] != 0) throw DomainError("L0 table must start with L0(0) = 0");
  for (std::size_t n = 1; n < l0.size(); ++n)
    if (l0[n] < l0[n - 1]) throw DomainError("L0 must be non-decreasing");
  RhsSpec r;
  r.kind_ = Kind::power_times_l0;
  r.beta_ = beta;
  r.l0_ = std::make_shared<const std::vector<std::int64_t>>(std::move(l0));
  r.name_ = std::move(name);
  return r;
}

std::int64_t RhsSpec::limit() const noexcept {
  if (kind_ == Kind::power_times_l0) return static_cast<std::int64_t>(l0_->size()) - 1;
  return std::numeric_limits<std::int64_t>::max();
}

double RhsSpec::value(std::int64_t n) const {
  if (n < 1 || n > limit()) throw RangeError("RHS index out of range");
  switch (kind_) {
    case Kind::power: return std::pow(static_cast<double>(n), -beta_);
    case Kind::delta: return n == 1 ? 1.0 : 0.0;
    case Kind::power_times_l0:
      return std::pow(static_cast<double>(n), -beta_) * static_cast<double>((*l0_)[n]);
  }
  return 0.0;
}

double RhsSpec::increment(std::int64_t n) const {
  if (n < 1 || n > limit()) throw RangeError("RHS index out of range");
  switch (kind_) {
    case Kind::power: return n == 1 ? 1.0 : power_step(n, 1.0 - beta_);
    case Kind::delta: return n == 1 ? 1.0 : (n == 2 ? -1.0 : 0.0);
    case Kind::power_times_l0: {
      const auto& l = *l0_;
      if (n == 1) return static_cast<double>(l[1]);
      const double s = 1.0 - beta_;
      return static_cast<double>(l[n]) * power_step(n, s) +
             static_cast<double>(l[n] - l[n - 1]) * std::pow(static_cast<double>(n - 1), s);
    }
  }
  return 0.0;
}

bool RhsSpec::is_rational() const noexcept {
  switch (kind_) {
    case Kind::power: return is_integer(beta_) && beta_ >= 0;
    case Kind::delta: return true;
    case Kind::power_times_l0: return is_integer(beta_);
  }
  return false;
}

Rational RhsSpec::exact_value(std::int64_t n) const {
  if (!is_rational()) throw BackendMismatchError("RHS '" + spec() + "' is not rational");
  if (n < 1 || n > limit()) throw RangeError("RHS index out of range");
  const auto b = static_cast<std::int64_t>(beta_);
  switch (kind_) {
    case Kind::power: return Rational::pow(n, -b);
    case Kind::delta: return Rational(n == 1 ? 1 : 0);
    case Kind::power_times_l0: return Rational::pow(n, -b) * Rational((*l0_)[n]);
  }
  return Rational(0);
}

std::string RhsSpec::spec() const {
  switch (kind_) {
    case Kind::power: return "power:" + fmt_double(beta_);
    case Kind::delta: return "delta";
    case Kind::power_times_l0: return (name_ == "l0" ? std::string("l0pow:") : name_ + ":") + fmt_double(beta_);
  }
  return "";
}

RhsSpec parse_rhs(std::string_view text, std::int64_t limit) {
  auto bad = [&]() {
    return FormatError("unknown RHS spec '" + std::string(text) + "'; expected power:<beta> | delta | l0pow:<beta>");
  };
  if (text == "delta") return RhsSpec::delta();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw bad();
  auto head = text.substr(0, colon);
  auto arg = text.substr(colon + 1);
  double beta = 0.0;
  auto first = arg.data();
  if (!arg.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, arg.data() + arg.size(), beta);
  if (res.ec != std::errc() || res.ptr != arg.data() + arg.size() || arg.empty()) throw bad();
  if (head == "power") return RhsSpec::power(beta);
  if (head == "l0pow") return RhsSpec::power_times_l0(beta, l0_three_smooth(std::max<std::int64_t>(limit, 1)));
  throw bad();
}

std::string_view backend_name(Backend b) { return b == Backend::exact ? "exact" : "float"; }

Backend parse_backend(std::string_view text) {
  if (text == "exact") return Backend::exact;
  if (text == "float" || text == "floating") return Backend::floating;
  throw FormatError("unknown backend '" + std::string(text) + "'; expected exact | float");
}

// ---- Coefficients --------------------------------------------------------

Coefficients::Coefficients(Kernel kernel, RhsSpec rhs, Backend backend, std::vector<double> values,
                           std::vector<Rational> exact)
    : kernel_(std::move(kernel)), rhs_(std::move(rhs)), backend_(backend), values_(std::move(values)),
      exact_(std::move(exact)) {
  if (backend_ == Backend::exact && exact_.size() != values_.size())
    throw DomainError("exact coefficients need one rational per value");
}

void Coefficients::check(std::int64_t n) const {
  if (n < 1 || n > limit()) throw RangeError("coefficient index " + std::to_string(n) + " outside [1, " + std::to_string(limit()) + "]");
}

double Coefficients::value(std::int64_t n) const {
  check(n);
  return values_[n - 1];
}

const Rational& Coefficients::exact(std::int64_t n) const {
  if (backend_ != Backend::exact) throw BackendMismatchError("coefficients were solved on the float backend");
  check(n);
  return exact_[n - 1];
}

Rational Coefficients::exact_n_a(std::int64_t n) const { return exact(n) * Rational(n); }

// ---- solve ---------------------------------------------------------------

namespace {

std::vector<double> ingham_divisor_float(const RhsSpec& rhs, std::int64_t N) {
  std::vector<double> b(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::int64_t n = 1; n <= N; ++n) b[n] = rhs.increment(n);
  for (std::int64_t d = 1; d <= N; ++d) {
    const double bd = b[d];
    if (bd == 0.0) continue;
    for (std::int64_t m = 2 * d; m <= N; m += d) b[m] -= bd;
  }
  std::vector<double> a(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) a[n - 1] = b[n] / static_cast<double>(n);
  return a;
}

// T(n) = n·RHS(n), exactly.
std::vector<Rational> exact_totals(const RhsSpec& rhs, std::int64_t N) {
  std::vector<Rational> t(static_cast<std::size_t>(N) + 1);
  for (std::int64_t n = 1; n <= N; ++n) t[n] = rhs.exact_value(n) * Rational(n);
  return t;
}

std::vector<Rational> ingham_divisor_exact(const RhsSpec& rhs, std::int64_t N) {
  auto t = exact_totals(rhs, N);
  std::vector<Rational> b(static_cast<std::size_t>(N) + 1);
  for (std::int64_t n = 1; n <= N; ++n) b[n] = t[n] - t[n - 1];
  for (std::int64_t d = 1; d <= N; ++d) {
    if (b[d].is_zero()) continue;
    for (std::int64_t m = 2 * d; m <= N; m += d) b[m] -= b[d];
  }
  return b;
}

// Forward substitution on Σ_{k≤n} b_k ⌊n/k⌋ = T(n), grouping k by ⌊n/k⌋.
std::vector<Rational> ingham_direct_exact(const RhsSpec& rhs, std::int64_t N) {
  auto t = exact_totals(rhs, N);
  std::vector<Rational> b(static_cast<std::size_t>(N) + 1);
  std::vector<Rational> prefix(static_cast<std::size_t>(N) + 1);
  for (std::int64_t n = 1; n <= N; ++n) {
    mpq_class s = 0;
    for (std::int64_t k = 1; k <= n - 1;) {
      const std::int64_t q = n / k;
      const std::int64_t k2 = std::min(n / q, n - 1);
      s += mpq_class((prefix[k2] - prefix[k - 1]).raw()) * mpz_class(static_cast<long>(q));
      k = k2 + 1;
    }
    b[n] = t[n] - Rational(s);
    prefix[n] = prefix[n - 1] + b[n];
  }
  return b;
}

std::vector<double> generic_float(const Kernel& kernel, const RhsSpec& rhs, std::int64_t N) {
  RowEvaluator rows(kernel, N);
  std::vector<double> row(static_cast<std::size_t>(N));
  std::vector<double> a(static_cast<std::size_t>(N));
  rows.fill(1, row);
  if (row[0] == 0.0) throw SingularKernelError(1);
  a[0] = 1.0;
  for (std::int64_t n = 2; n <= N; ++n) {
    rows.fill(n, row);
    const double diag = row[n - 1];
    if (diag == 0.0) throw SingularKernelError(n);
    CompensatedSum s;
    for (std::int64_t k = 1; k < n; ++k) s.add(a[k - 1] * row[k - 1]);
    a[n - 1] = (rhs.value(n) - s.value()) / diag;
  }
  return a;
}

}  // namespace

Coefficients solve(const Kernel& kernel, const RhsSpec& rhs, std::int64_t limit, Backend backend,
                   const SolveOptions& options) {
  using Method = SolveOptions::Method;
  if (limit < 1) throw DomainError("solve needs N >= 1");
  if (limit > rhs.limit()) throw RangeError("RHS table covers only n <= " + std::to_string(rhs.limit()));
  if (rhs.value(1) != 1.0) throw DomainError("RHS(1) must equal 1 so that a_1 = 1");
  const bool ingham = kernel.kind() == KernelKind::ingham;
  if (options.method == Method::divisor && !ingham)
    throw UnsupportedError("divisor method needs the Ingham kernel");

  if (backend == Backend::exact) {
    if (!ingham) throw BackendMismatchError("exact backend needs the Ingham kernel, got '" + kernel.spec() + "'");
    if (!rhs.is_rational()) throw BackendMismatchError("exact backend needs a rational RHS, got '" + rhs.spec() + "'");
    auto b = options.method == Method::direct ? ingham_direct_exact(rhs, limit) : ingham_divisor_exact(rhs, limit);
    std::vector<Rational> a(static_cast<std::size_t>(limit));
    std::vector<double> d(static_cast<std::size_t>(limit));
    for (std::int64_t n = 1; n <= limit; ++n) {
      a[n - 1] = b[n] / Rational(n);
      d[n - 1] = a[n - 1].to_double();
    }
    if (a[0] != Rational(1)) throw DomainError("solve produced a_1 != 1");
    return Coefficients(kernel, rhs, backend, std::move(d), std::move(a));
  }

  if (ingham && options.method != Method::direct) {
    if (limit > options.fast_cap)
      throw CapacityError("Ingham fast path capped at N = " + std::to_string(options.fast_cap));
    return Coefficients(kernel, rhs, backend, ingham_divisor_float(rhs, limit));
  }
  if (limit > options.generic_cap)
    throw CapacityError("forward substitution is O(N^2) and capped at N = " + std::to_string(options.generic_cap) +
                        "; raise the cap explicitly to go further");
  return Coefficients(kernel, rhs, backend, generic_float(kernel, rhs, limit));
}

// ---- closed forms --------------------------------------------------------

std::vector<double> ingham_coeff_closed(const MobiusTable& table, double beta, std::int64_t limit) {
  if (!std::isfinite(beta)) throw DomainError("closed form needs a finite beta");
  if (limit < 1 || limit > table.limit()) throw RangeError("closed form limit outside the Möbius table");
  const double s = 1.0 - beta;
  std::vector<double> out(static_cast<std::size_t>(limit) + 1, 0.0);
  auto mu = table.mu_values();
  for (std::int64_t d = 1; d <= limit; ++d) {
    const double diff = d == 1 ? 1.0 : power_step(d, s);
    for (std::int64_t m = d, j = 1; m <= limit; m += d, ++j)
      if (mu[j] != 0) out[m] += mu[j] * diff;
  }
  return out;
}

std::vector<Rational> ingham_coeff_closed_exact(const MobiusTable& table, std::int64_t beta, std::int64_t limit) {
  if (limit < 1 || limit > table.limit()) throw RangeError("closed form limit outside the Möbius table");
  std::vector<Rational> out(static_cast<std::size_t>(limit) + 1);
  auto mu = table.mu_values();
  const std::int64_t s = 1 - beta;
  for (std::int64_t d = 1; d <= limit; ++d) {
    // 0^0 = 0 keeps the d = 1 term equal to 1 for every β.
    const Rational diff = d == 1 ? Rational(1) : Rational::pow(d, s) - Rational::pow(d - 1, s);
    if (diff.is_zero()) continue;
    for (std::int64_t m = d, j = 1; m <= limit; m += d, ++j) {
      if (mu[j] == 1) out[m] += diff;
      else if (mu[j] == -1) out[m] -= diff;
    }
  }
  return out;
}

std::vector<std::int64_t> delta_coeff_closed(const MobiusTable& table, std::int64_t limit) {
  if (limit < 1 || limit > table.limit()) throw RangeError("closed form limit outside the Möbius table");
  std::vector<std::int64_t> out(static_cast<std::size_t>(limit) + 1, 0);
  for (std::int64_t n = 1; n <= limit; ++n) out[n] = table.mu(n) - (n % 2 == 0 ? table.mu(n / 2) : 0);
  return out;
}

// ---- partial sums --------------------------------------------------------

PartialSumSeries partial_sums(const Coefficients& coeffs, const std::vector<std::int64_t>& checkpoints) {
  if (checkpoints.empty()) throw DomainError("partial_sums needs at least one checkpoint");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (checkpoints[i] < 1 || checkpoints[i] > coeffs.limit())
      throw RangeError("checkpoint " + std::to_string(checkpoints[i]) + " outside [1, N]");
    if (i && checkpoints[i] <= checkpoints[i - 1]) throw DomainError("checkpoints must be strictly ascending");
  }
  PartialSumSeries out;
  out.checkpoints = checkpoints;
  out.provenance = coeffs.kernel().spec() + "|" + coeffs.rhs().spec();
  const bool exact = coeffs.backend() == Backend::exact;
  CompensatedSum a, a1;
  Rational ea, ea1;
  std::size_t j = 0;
  double peak = 0.0, peak1 = 0.0;
  for (std::int64_t n = 1; j < checkpoints.size(); ++n) {
    const double v = coeffs.value(n);
    a.add(v);
    a1.add(static_cast<double>(n) * v);
    peak = std::max(peak, std::abs(a.value()));
    peak1 = std::max(peak1, std::abs(a1.value()));
    if (exact) {
      ea += coeffs.exact(n);
      ea1 += coeffs.exact_n_a(n);
    }
    if (n == checkpoints[j]) {
      out.A.push_back(a.value());
      out.A1.push_back(a1.value());
      out.A_peak.push_back(peak);
      out.A1_peak.push_back(peak1);
      peak = peak1 = 0.0;
      if (exact) {
        out.A_exact.push_back(ea);
        out.A1_exact.push_back(ea1);
      }
      ++j;
    }
  }
  return out;
}

std::vector<std::int64_t> l0_three_smooth(std::int64_t limit) {
  if (limit < 1) throw DomainError("l0_three_smooth needs limit >= 1");
  std::vector<std::int64_t> l0(static_cast<std::size_t>(limit) + 1, 0);
  for (std::int64_t p2 = 1; p2 <= limit; p2 = p2 > limit / 2 ? limit + 1 : p2 * 2)
    for (std::int64_t m = p2; m <= limit; m = m > limit / 3 ? limit + 1 : m * 3) l0[m] = 1;
  for (std::int64_t n = 1; n <= limit; ++n) l0[n] += l0[n - 1];
  return l0;
}

// ---- residuals -----------------------------------------------------------

ResidualReport residual_check(const Coefficients& coeffs) {
  const std::int64_t N = coeffs.limit();
  const RhsSpec& rhs = coeffs.rhs();
  ResidualReport rep;
  auto note = [&](std::int64_t n, double lhs) {
    const double r = rhs.value(n);
    const double scaled = std::abs(lhs - r) / (std::max(1.0, std::abs(r)) * static_cast<double>(n));
    if (scaled > rep.max_scaled || rep.worst_n == 0) {
      rep.max_scaled = scaled;
      rep.worst_n = n;
    }
  };

  if (coeffs.kernel().kind() == KernelKind::ingham) {
    // Σ_k a_k G(n,k) = (1/n)·Σ_{m≤n} Σ_{d|m} d·a_d.
    if (coeffs.backend() == Backend::exact) {
      std::vector<Rational> u(static_cast<std::size_t>(N) + 1);
      for (std::int64_t d = 1; d <= N; ++d) {
        const Rational bd = coeffs.exact_n_a(d);
        if (bd.is_zero()) continue;
        for (std::int64_t m = d; m <= N; m += d) u[m] += bd;
      }
      Rational acc;
      rep.exact_zero = true;
      for (std::int64_t n = 1; n <= N; ++n) {
        acc += u[n];
        if (n >= 2) {
          if (acc != rhs.exact_value(n) * Rational(n)) rep.exact_zero = false;
          note(n, (acc / Rational(n)).to_double());
        }
      }
      return rep;
    }
    std::vector<double> u(static_cast<std::size_t>(N) + 1, 0.0);
    for (std::int64_t d = 1; d <= N; ++d) {
      const double bd = coeffs.n_a(d);
      if (bd == 0.0) continue;
      for (std::int64_t m = d; m <= N; m += d) u[m] += bd;
    }
    CompensatedSum acc;
    for (std::int64_t n = 1; n <= N; ++n) {
      acc.add(u[n]);
      if (n >= 2) note(n, acc.value() / static_cast<double>(n));
    }
    return rep;
  }

  RowEvaluator rows(coeffs.kernel(), N);
  std::vector<double> row(static_cast<std::size_t>(N));
  for (std::int64_t n = 2; n <= N; ++n) {
    rows.fill(n, row);
    CompensatedSum s;
    for (std::int64_t k = 1; k <= n; ++k) s.add(coeffs.value(k) * row[k - 1]);
    note(n, s.value());
  }
  return rep;
}

}  // namespace raf
