#include "raf/mellin.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "raf/error.hpp"
#include "raf/summation.hpp"

namespace raf {

namespace {

constexpr double kPi = std::numbers::pi;

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw DomainError(std::string(what) + " must be finite");
}

// B_2, B_4, ..., B_20.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,     -1.0 / 30.0,        1.0 / 42.0,     -1.0 / 30.0,       5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,       -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0};

Complex zeta_euler_maclaurin(Complex s) {
  const auto M = static_cast<std::int64_t>(std::max(20.0, std::ceil(std::abs(s))));
  CompensatedComplexSum sum;
  for (std::int64_t n = 1; n < M; ++n) sum.add(std::exp(-s * std::log(static_cast<double>(n))));
  const double lm = std::log(static_cast<double>(M));
  const Complex m_s = std::exp(-s * lm);  // M^{-s}
  sum.add(m_s * static_cast<double>(M) / (s - 1.0));
  sum.add(m_s * 0.5);
  // B_{2k}/(2k)! · s(s+1)...(s+2k-2) · M^{-s-2k+1}
  Complex rising = s;  // s(s+1)...(s+2k-2)
  double fact = 2.0;   // (2k)!
  Complex mpow = m_s / static_cast<double>(M);
  for (int k = 1; k <= 10; ++k) {
    sum.add(kBernoulli[k - 1] / fact * rising * mpow);
    rising *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
    fact *= static_cast<double>((2 * k + 1) * (2 * k + 2));
    mpow /= static_cast<double>(M) * static_cast<double>(M);
  }
  return sum.value();
}

Complex expm1c(Complex u) {
  if (std::abs(u) < 0.5) {
    Complex term = u, acc = u;
    for (int k = 2; k < 30; ++k) {
      term *= u / static_cast<double>(k);
      acc += term;
      if (std::abs(term) < 1e-18 * std::abs(acc)) break;
    }
    return acc;
  }
  return std::exp(u) - 1.0;
}

// (λ^w - 1)/w, continuous at w = 0.
Complex disc_e(double log_lambda, Complex w) {
  if (std::abs(w) < 1e-300) return log_lambda;
  return expm1c(w * log_lambda) / w;
}

// Nearest point of the lattice base + 2πik/period_log with k != 0, if z sits on it.
bool on_lattice(Complex z, double re, double log_base, long* k_out) {
  const double step = 2.0 * kPi / log_base;
  const long k = std::lround(z.imag() / step);
  if (k_out) *k_out = k;
  if (k == 0) return false;
  const Complex p(re, static_cast<double>(k) * step);
  return std::abs(z - p) <= 1e-12 * (1.0 + std::abs(p));
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

TransformResult closed(Complex v, std::string note = {}) {
  TransformResult r;
  r.value = v;
  r.method = TransformResult::Method::closed;
  r.condition_note = std::move(note);
  return r;
}

Complex ingham_closed(Complex z) {
  if (std::abs(z) < 1e-8) return 1.0;
  if (z == Complex(1.0, 0.0)) throw PoleError("Ingham transform has a pole at z=1");
  return z / (z - 1.0) * zeta(1.0 - z);
}

Complex ingham_exp_closed(int q, Complex z) {
  const double lq = std::log(static_cast<double>(q));
  long k = 0;
  if (std::abs(z - 1.0) <= 1e-12 || on_lattice(z, 1.0, lq, &k))
    throw PoleError("scaled Ingham transform has a pole at z=1+2πi·" + std::to_string(k) + "/ln " + std::to_string(q));
  const Complex qz = std::exp(z * lq);
  const double qd = static_cast<double>(q);
  return (qz * qz - 2.0 * qz + qd) / (qd - qz);
}

}  // namespace

Complex log_gamma(Complex z) {
  static constexpr std::array<double, 9> p = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  z -= 1.0;
  Complex x = p[0];
  for (int i = 1; i < 9; ++i) x += p[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

Complex zeta(Complex s) {
  require_finite(s, "zeta argument");
  if (s == Complex(1.0, 0.0)) throw PoleError("zeta has a pole at s=1");
  if (!(s.real() > -10.0) || std::abs(s.imag()) > 100.0)
    throw UnsupportedError("zeta is implemented only for Re s > -10 and |Im s| <= 100");
  if (s.real() >= 0.0) return zeta_euler_maclaurin(s);
  // ζ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s) ζ(1-s)
  const Complex one_minus = 1.0 - s;
  const Complex log_factor = s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_gamma(one_minus);
  return std::exp(log_factor) * std::sin(kPi * s / 2.0) * zeta_euler_maclaurin(one_minus);
}

TransformResult closed_transform(const Kernel& kernel, Complex z) {
  require_finite(z, "transform argument");
  using std::get_if;
  const auto& v = kernel.variant();
  if (get_if<kernels::Ingham>(&v)) {
    std::string note;
    if (std::abs(z - 1.0) < 1e-6) note = "near pole at z=1";
    if (std::abs(z) < 1e-8) note = "removable singularity at z=0 patched to 1";
    return closed(ingham_closed(z), note);
  }
  if (auto a = get_if<kernels::Affine>(&v)) {
    if (z == Complex(1.0, 0.0)) throw PoleError("affine transform has a pole at z=1");
    const double lam = a->lambda;
    return closed(lam - (1.0 - lam) * z / (1.0 - z), std::abs(z - 1.0) < 1e-6 ? "near pole at z=1" : "");
  }
  if (auto l = get_if<kernels::Log>(&v)) {
    if (z == Complex(0.0, 0.0)) throw PoleError("log transform has a pole at z=0");
    return closed((z - l->lambda) / z, std::abs(z) < 1e-6 ? "near pole at z=0" : "");
  }
  if (auto d = get_if<kernels::Disc>(&v)) {
    const double ll = std::log(d->lambda);
    long k = 0;
    if (on_lattice(z, 0.0, ll, &k))
      throw PoleError("disc transform has a pole at z=2πi·" + std::to_string(k) + "/ln " + fmt(d->lambda));
    return closed(disc_e(ll, z - 1.0) / disc_e(ll, z));
  }
  if (get_if<kernels::RationalRaf>(&v)) return closed(1.0);
  if (get_if<kernels::GeneralizedIngham>(&v))
    throw UnsupportedError("the generalized Ingham transform involves an L-function and is not implemented");
  const auto& s = std::get<kernels::Scaled>(v);
  switch (s.f.kind()) {
    case FSpec::Kind::identity:
    case FSpec::Kind::power: return closed_transform(*s.base, z);
    case FSpec::Kind::exp_plus_one:
      if (s.base->kind() == KernelKind::ingham) return closed(ingham_exp_closed(s.f.base(), z));
      break;
  }
  throw UnsupportedError("no closed transform for '" + kernel.spec() + "'");
}

namespace {

void check_limit_args(Complex z, std::int64_t n) {
  require_finite(z, "transform argument");
  if (!(z.real() < 0.0)) throw DomainError("limit transform needs Re z < 0");
  if (n < 10) throw DomainError("limit transform needs n >= 10");
}

Complex limit_sum(const Kernel& kernel, Complex z, std::int64_t n) {
  RowEvaluator rows(kernel, n);
  std::vector<double> row(static_cast<std::size_t>(n));
  rows.fill(n, row);
  const double ln = std::log(static_cast<double>(n));
  const Complex e = -z - 1.0;
  CompensatedComplexSum sum;
  for (std::int64_t k = 1; k <= n; ++k) {
    const double g = row[k - 1];
    if (g == 0.0) continue;
    sum.add(g * std::exp(e * (std::log(static_cast<double>(k)) - ln)));
  }
  return -z / static_cast<double>(n) * sum.value();
}

Complex limit_sum_f(const Kernel& scaled, const FSpec& f, Complex z, std::int64_t n) {
  const double lfn = f.log_value(n);
  // f(k)^{-z}·f(n)^{z} = exp(z·(ln f(n) - ln f(k))); f(0)=0 contributes 0 when Re z < 0.
  auto weight = [&](std::int64_t k) -> Complex {
    if (k == 0) {
      const double f0 = f.value(0.0);
      if (f0 == 0.0) return 0.0;
      return std::exp(z * (lfn - std::log(f0)));
    }
    return std::exp(z * (lfn - f.log_value(k)));
  };
  CompensatedComplexSum sum;
  Complex prev = weight(0);
  for (std::int64_t k = 1; k <= n; ++k) {
    const Complex cur = weight(k);
    sum.add((cur - prev) * eval(scaled, n, k));
    prev = cur;
  }
  return sum.value();
}

TransformResult with_report(Complex at_n, Complex at_2n, std::int64_t n) {
  TransformResult r;
  r.value = at_n;
  r.method = TransformResult::Method::limit;
  r.n = n;
  r.convergence = ConvergenceReport{n, at_n, at_2n, std::abs(at_2n - at_n)};
  return r;
}

}  // namespace

TransformResult limit_transform(const Kernel& kernel, Complex z, std::int64_t n) {
  check_limit_args(z, n);
  return with_report(limit_sum(kernel, z, n), limit_sum(kernel, z, 2 * n), n);
}

TransformResult limit_transform_wrt_f(const Kernel& kernel, const FSpec& f, Complex z, std::int64_t n) {
  check_limit_args(z, n);
  if (!kernel.is_fgv()) throw UnsupportedError("transform with respect to f needs an FGV kernel, got '" + kernel.spec() + "'");
  const Kernel scaled = Kernel::scaled(kernel, f);
  return with_report(limit_sum_f(scaled, f, z, n), limit_sum_f(scaled, f, z, 2 * n), n);
}

std::vector<Complex> phi_f_zeros(int q, double t_lo, double t_hi) {
  if (q < 2) throw DomainError("phi_f_zeros needs q >= 2");
  if (!(t_lo < t_hi) || !std::isfinite(t_lo) || !std::isfinite(t_hi)) throw DomainError("phi_f_zeros needs t_lo < t_hi");
  const double qd = static_cast<double>(q);
  const double lq = std::log(qd);
  const double step = 2.0 * kPi / lq;
  const double root = std::sqrt(qd - 1.0);
  std::vector<Complex> out;
  for (double sign : {1.0, -1.0}) {
    const Complex t(1.0 / qd, sign * root / qd);
    const Complex z0 = -std::log(t) / lq;
    const auto m_lo = static_cast<long>(std::ceil((t_lo - z0.imag()) / step));
    const auto m_hi = static_cast<long>(std::floor((t_hi - z0.imag()) / step));
    for (long m = m_lo; m <= m_hi; ++m) out.emplace_back(z0.real(), z0.imag() + static_cast<double>(m) * step);
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) { return a.imag() < b.imag(); });
  return out;
}

}  // namespace raf
