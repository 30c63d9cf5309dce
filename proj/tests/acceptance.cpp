// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "raf/asymptotics.hpp"
#include "raf/combinatorics.hpp"
#include "raf/mellin.hpp"
#include "raf/solver.hpp"

using namespace raf;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int mu_trial(std::int64_t n) {
  int sign = 1;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    n /= p;
    if (n % p == 0) return 0;
    sign = -sign;
  }
  return n > 1 ? -sign : sign;
}

bool prime_trial(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// ζ(s) for real 0 < s < 1 from the alternating series with repeated averaging.
double zeta_eta(double s) {
  constexpr int terms = 4000, levels = 30;
  std::vector<double> partial;
  double acc = 0;
  for (int n = 1; n <= terms + levels; ++n) {
    acc += (n % 2 ? 1.0 : -1.0) * std::pow(static_cast<double>(n), -s);
    if (n >= terms) partial.push_back(acc);
  }
  for (int l = 0; l < levels; ++l)
    for (std::size_t i = 0; i + 1 < partial.size() - l; ++i) partial[i] = 0.5 * (partial[i] + partial[i + 1]);
  return partial[0] / (1.0 - std::pow(2.0, 1.0 - s));
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> out;
  for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(std::round((lo + i * step) * 1e9) / 1e9);
  return out;
}

Outcome meissel_elias() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t N = 100000;
  const auto t = sieve(N);
  const auto meissel = count_formula_range(CountSpec::coprime_tuples(1, N), t);
  const auto elias = count_formula_range(CountSpec::elias_gamma(N), t);
  for (std::int64_t n = 1; n <= N; ++n) {
    if (meissel[n] != 1) return {false, fmt("Meissel sum is %lld at n=%lld", (long long)meissel[n], (long long)n)};
    const std::int64_t want = 1 + 2 * (std::bit_width(static_cast<std::uint64_t>(n)) - 1);
    if (elias[n] != want) return {false, fmt("Elias sum wrong at n=%lld", (long long)n)};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {s < 10, fmt("exact for n <= 1e5 in %.2f s (limit 10 s)", s)};
}

Outcome beta_one() {
  const auto c = solve(Kernel::ingham(), RhsSpec::power(1), 10000, Backend::exact);
  for (std::int64_t n = 1; n <= 10000; ++n)
    if (c.exact(n) != Rational(mu_trial(n), n)) return {false, fmt("a_n != mu(n)/n at n=%lld", (long long)n)};
  return {true, "a_n = mu(n)/n exactly for n <= 1e4"};
}

Outcome beta_infinity() {
  const std::int64_t N = 10000;
  const auto t = sieve(N);
  const auto c = solve(Kernel::ingham(), RhsSpec::delta(), N, Backend::exact);
  const auto closed = delta_coeff_closed(t, N);
  std::vector<std::int64_t> M(N + 1, 0);
  for (std::int64_t n = 1; n <= N; ++n) {
    M[n] = M[n - 1] + mu_trial(n);
    if (c.exact_n_a(n) != Rational(closed[n])) return {false, fmt("closed form differs at n=%lld", (long long)n)};
    if (closed[n] != mu_trial(n) - (n % 2 ? 0 : mu_trial(n / 2))) return {false, "closed form disagrees with trial division"};
  }
  std::vector<std::int64_t> cps;
  for (int j = 1; j <= 50; ++j) cps.push_back(j * N / 50 - 7 * (j % 3));
  const auto s = partial_sums(c, cps);
  for (std::size_t j = 0; j < cps.size(); ++j)
    if (s.A1_exact[j] != Rational(M[cps[j]] - M[cps[j] / 2]))
      return {false, fmt("A1 != M(x)-M(x/2) at x=%lld", (long long)cps[j])};
  return {true, "matches closed form for n <= 1e4; A1 identity at 50 checkpoints"};
}

Outcome closed_vs_solver() {
  const std::int64_t N = 2000;
  const auto t = sieve(N);
  SolveOptions direct;
  direct.method = SolveOptions::Method::direct;
  for (int beta : {0, 1, 2, 3}) {
    const auto closed = ingham_coeff_closed_exact(t, beta, N);
    const auto s = solve(Kernel::ingham(), RhsSpec::power(beta), N, Backend::exact, direct);
    for (std::int64_t n = 1; n <= N; ++n)
      if (closed[n] != s.exact_n_a(n)) return {false, fmt("beta=%d differs at n=%lld", beta, (long long)n)};
  }
  const auto closed = ingham_coeff_closed(t, 0.5, N);
  const auto s = solve(Kernel::ingham(), RhsSpec::power(0.5), N, Backend::floating, direct);
  double worst = 0;
  for (std::int64_t n = 1; n <= N; ++n)
    worst = std::max(worst, std::abs(closed[n] - s.n_a(n)) / std::max(1.0, std::abs(s.n_a(n))));
  return {worst <= 1e-9, fmt("exact for beta in {0,1,2,3}; beta=0.5 max rel %.2e (limit 1e-9)", worst)};
}

Outcome smooth_l0() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t N = 5000;
  const auto c = solve(Kernel::ingham(), RhsSpec::power_times_l0(1, l0_three_smooth(N)), N, Backend::exact);
  for (std::int64_t k = 1; k <= N; ++k)
    if (c.exact(k) != Rational(mu_trial(6 * k), k)) return {false, fmt("a_k != mu(6k)/k at k=%lld", (long long)k)};
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {s < 30, fmt("a_k = mu(6k)/k for k <= 5000 in %.2f s (limit 30 s)", s)};
}

Outcome mellin_agreement() {
  double worst = 0;
  for (Complex z : {Complex(-0.5, 0), Complex(-1, 0), Complex(-2, 0), Complex(-1, 1)}) {
    const Complex c = closed_transform(Kernel::ingham(), z).value;
    const Complex l = limit_transform(Kernel::ingham(), z, 100000).value;
    worst = std::max(worst, std::abs(l - c) / std::abs(c));
  }
  const double e0 = std::abs(closed_transform(Kernel::ingham(), 0.0).value - 1.0);
  const double e1 = std::abs(closed_transform(Kernel::ingham(), -1.0).value - pi * pi / 12);
  return {worst < 0.01 && e0 <= 1e-10 && e1 <= 1e-10,
          fmt("limit vs closed max rel %.2e (limit 0.01); |F(0)-1|=%.1e |F(-1)-pi^2/12|=%.1e", worst, e0, e1)};
}

Outcome zeta_checks() {
  const double e2 = std::abs(zeta(2.0) - pi * pi / 6);
  const double z1 = std::abs(zeta(Complex(0.5, 14.134725)));
  std::mt19937_64 rng(20240531);
  std::uniform_real_distribution<double> re(-9.9, 10.0), im(-100.0, 100.0);
  double sym = 0;
  for (int i = 0; i < 100; ++i) {
    const Complex s(re(rng), im(rng));
    const Complex a = zeta(s);
    sym = std::max(sym, std::abs(a - std::conj(zeta(std::conj(s)))) / std::max(1.0, std::abs(a)));
  }
  const double eta = std::abs(zeta(0.75).real() - zeta_eta(0.75));
  return {e2 < 1e-12 && z1 < 1e-5 && sym <= 1e-12 && eta < 1e-10,
          fmt("|zeta(2)-pi^2/6|=%.1e |zeta(1/2+14.134725i)|=%.1e conj sym %.1e eta cross-check %.1e", e2, z1, sym, eta)};
}

Outcome scaled_transform() {
  const double v = std::abs(limit_transform_wrt_f(Kernel::ingham(), FSpec::exp_plus_one(2), -1.0, 60).value - 5.0 / 6);
  double re_dev = 0, val = 0;
  std::size_t count = 0;
  for (int q = 2; q <= 10; ++q) {
    const auto k = Kernel::scaled(Kernel::ingham(), FSpec::exp_plus_one(q));
    for (Complex z : phi_f_zeros(q, -50, 50)) {
      re_dev = std::max(re_dev, std::abs(z.real() - 0.5));
      val = std::max(val, std::abs(closed_transform(k, z).value));
      ++count;
    }
  }
  return {v < 1e-6 && re_dev < 1e-9 && val < 1e-9 && count > 0,
          fmt("|F_f(-1)-5/6|=%.1e; %zu zeros, max |Re z-1/2|=%.1e max |F_f|=%.1e", v, count, re_dev, val)};
}

Outcome regime() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t N = 1000000;
  Tolerances tol;
  tol.const_tol = 0.05;
  tol.rule = Tolerances::MatchRule::tolerance;
  const double pred[] = {12 / (pi * pi), 1.0 / ((0.25 / (0.25 - 1.0)) * zeta_eta(0.75))};
  std::string detail;
  bool ok = true;
  int i = 0;
  for (double beta : {-1.0, 0.25}) {
    const auto v = regime_scan(Kernel::ingham(), beta, N, tol);
    const double rel = std::abs(v.empirical_constant - pred[i]) / std::abs(pred[i]);
    ok = ok && v.verdict == Verdict::asymptotic_match && rel <= 0.05;
    detail += fmt("beta=%g %s const rel %.1e; ", beta, std::string(verdict_name(v.verdict)).c_str(), rel);
    ++i;
  }
  for (double beta : {0.75, 1.0, 2.0}) {
    const auto v = regime_scan(Kernel::ingham(), beta, N, tol);
    ok = ok && v.fitted_slope <= -0.35;
    detail += fmt("beta=%g slope %.3f; ", beta, v.fitted_slope);
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && s <= 120, detail + fmt("%.1f s", s)};
}

Outcome index_estimates() {
  const auto t0 = std::chrono::steady_clock::now();
  Tolerances tol;
  tol.const_tol = 0.05;
  tol.rule = Tolerances::MatchRule::converging;
  struct Case {
    const char* name;
    Kernel kernel;
    std::vector<double> grid;
    std::int64_t N;
    double lo, hi;
  };
  const Case cases[] = {
      {"affine(0.5)", Kernel::affine(0.5), range(0.1, 0.9, 0.1), 20000, 0.4, 0.6},
      {"log(0.5)", Kernel::log(0.5), range(0.1, 0.9, 0.1), 20000, 0.4, 0.6},
      {"disc(2)", Kernel::disc(2), range(0.5, 1.4, 0.1), 20000, 0.85, 1.15},
      {"ingham", Kernel::ingham(), range(0.1, 0.9, 0.1), 1000000, 0.35, 0.65},
  };
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    try {
      const auto est = estimate_index(c.kernel, c.grid, c.N, tol);
      const bool in = est.alpha_hat >= c.lo && est.alpha_hat <= c.hi;
      ok = ok && in;
      detail += fmt("%s %.3f%s; ", c.name, est.alpha_hat, in ? "" : " (outside)");
    } catch (const std::exception& e) {
      ok = false;
      detail += fmt("%s failed: %s; ", c.name, e.what());
    }
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && s <= 600, detail + fmt("%.1f s", s)};
}

Outcome hlr() {
  const std::int64_t N = 100000;
  const auto r1 = hlr_report(solve(Kernel::ingham(), RhsSpec::power(1), N, Backend::exact));
  bool ok = r1.sup_abs == 1.0;
  std::string detail = fmt("beta=1 sup %.17g; ", r1.sup_abs);
  std::vector<std::int64_t> top;
  for (std::int64_t p = N; top.size() < 100; --p)
    if (prime_trial(p)) top.push_back(p);
  for (double beta : {0.25, 0.5, 2.0}) {
    const auto r = hlr_report(solve(Kernel::ingham(), RhsSpec::power(beta), N, Backend::floating));
    // p·a_p = (p^{1-β} - (p-1)^{1-β}) - 1 for primes p.
    double mean = 0;
    for (auto p : top) mean += std::pow(double(p), 1 - beta) - std::pow(double(p - 1), 1 - beta) - 1.0;
    mean /= static_cast<double>(top.size());
    ok = ok && r.growth_exponent < 0.05 && r.prime_tail_mean >= -1.05 && r.prime_tail_mean <= -0.95 &&
         std::abs(r.prime_tail_mean - mean) < 1e-9;
    detail += fmt("beta=%g growth %.3f tail %.4f (oracle %.4f); ", beta, r.growth_exponent, r.prime_tail_mean, mean);
  }
  return {ok, detail};
}

Outcome count_oracles() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t N = 2000;
  const auto t = sieve(30 * N);
  std::vector<CountSpec> kinds;
  for (int m = 1; m <= 4; ++m) kinds.push_back(CountSpec::coprime_tuples(m, N));
  for (int p : {2, 3}) kinds.push_back(CountSpec::p_free(p, N));
  for (int p : {2, 3, 5}) kinds.push_back(CountSpec::prime_powers(p, N));
  for (const auto& P : std::vector<std::vector<int>>{{2}, {3}, {5}, {2, 3}, {2, 5}, {3, 5}, {2, 3, 5}})
    kinds.push_back(CountSpec::smooth(P, N));
  kinds.push_back(CountSpec::elias_gamma(N));
  for (const auto& spec : kinds) {
    const auto f = count_formula_range(spec, t);
    for (std::int64_t n = 1; n <= N; ++n)
      if (f[n] != count_oracle(spec.with_n(n)))
        return {false, fmt("%s differs at n=%lld", spec.what().c_str(), (long long)n)};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {s < 60, fmt("%zu kinds exhaustive for n <= 2000 in %.1f s (limit 60 s)", kinds.size(), s)};
}

Outcome jordan() {
  const auto t = sieve(1000000);
  const auto r = jordan_partial_check(t, 0.25, 1000000);
  const double pred = 1.0 / (0.75 * zeta_eta(0.75));
  const double rel = std::abs(r.empirical_constant - pred) / std::abs(pred);
  return {std::abs(r.fitted_exponent - 0.75) <= 0.05 && rel <= 0.05,
          fmt("exponent %.4f (0.75 +- 0.05); constant %.5f vs %.5f rel %.1e", r.fitted_exponent, r.empirical_constant, pred, rel)};
}

Outcome performance() {
  auto t0 = std::chrono::steady_clock::now();
  const auto c = solve(Kernel::ingham(), RhsSpec::power(0.5), 1000000, Backend::floating);
  const double fast = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  t0 = std::chrono::steady_clock::now();
  const auto t = sieve(10000000);
  const double sv = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::int64_t m = 0;
  for (std::int64_t n = 1; n <= 100000; ++n) m += mu_trial(n);
  const bool sane = c.limit() == 1000000 && t.mertens(100000) == m;
  return {sane && fast < 10 && sv < 5, fmt("fast path N=1e6 %.2f s (limit 10 s); sieve 1e7 %.2f s (limit 5 s)", fast, sv)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"meissel-elias", meissel_elias},
      {"beta1-exact", beta_one},
      {"delta-exact", beta_infinity},
      {"closed-vs-solver", closed_vs_solver},
      {"smooth-l0-inverse", smooth_l0},
      {"mellin-agreement", mellin_agreement},
      {"zeta", zeta_checks},
      {"scaled-transform", scaled_transform},
      {"regime", regime},
      {"index", index_estimates},
      {"hlr", hlr},
      {"count-oracles", count_oracles},
      {"jordan", jordan},
      {"performance", performance},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed ? 1 : 0;
}
