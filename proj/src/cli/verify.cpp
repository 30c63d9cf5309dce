#include "raf/verify.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "raf/asymptotics.hpp"
#include "raf/combinatorics.hpp"
#include "raf/error.hpp"
#include "raf/mellin.hpp"
#include "raf/sieve.hpp"
#include "raf/solver.hpp"

namespace raf {

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

class Runner {
 public:
  Runner(std::vector<Check>& out, const std::function<void(const Check&)>& cb) : out_(out), cb_(cb) {}

  template <class F>
  void operator()(std::string name, F&& body) {
    Check c;
    c.name = std::move(name);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Outcome o = body();
      c.passed = o.ok;
      c.detail = std::move(o.detail);
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail = std::string("exception: ") + e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cb_) cb_(c);
    out_.push_back(std::move(c));
  }

 private:
  std::vector<Check>& out_;
  const std::function<void(const Check&)>& cb_;
};

void exact_checks(Runner& run, const MobiusTable& table) {
  run("meissel", [&]() -> Outcome {
    const auto f = count_formula_range(CountSpec::coprime_tuples(1, 100000), table);
    for (std::int64_t n = 1; n <= 100000; ++n)
      if (f[n] != 1) return {false, "sum != 1 at n=" + std::to_string(n)};
    return {true, "sum mu(k)[n/k] = 1 for n <= 100000"};
  });
  run("elias", [&]() -> Outcome {
    const auto f = count_formula_range(CountSpec::elias_gamma(100000), table);
    for (std::int64_t n = 1; n <= 100000; ++n) {
      const std::int64_t want = 1 + 2 * (static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(n))) - 1);
      if (f[n] != want) return {false, "mismatch at n=" + std::to_string(n)};
    }
    return {true, "1 + 2 floor(log2 n) for n <= 100000"};
  });
  run("smooth-bridge", [&]() -> Outcome {
    const std::int64_t n_max = 100000;
    const auto wide = table.limit() >= 6 * n_max ? table : sieve(6 * n_max);
    const auto f = count_formula_range(CountSpec::smooth({2, 3}, n_max), wide);
    const auto l0 = l0_three_smooth(n_max);
    for (std::int64_t n = 1; n <= n_max; ++n)
      if (f[n] != l0[n]) return {false, "mismatch at n=" + std::to_string(n)};
    return {true, "sum mu(6k)[n/k] = L0(n) for n <= " + std::to_string(n_max)};
  });
  run("beta1-exact", [&]() -> Outcome {
    const auto c = solve(Kernel::ingham(), RhsSpec::power(1), 10000, Backend::exact);
    for (std::int64_t n = 1; n <= 10000; ++n)
      if (c.exact(n) != Rational(table.mu(n), n)) return {false, "a_n != mu(n)/n at n=" + std::to_string(n)};
    return {true, "a_n = mu(n)/n for n <= 10000"};
  });
  run("delta-exact", [&]() -> Outcome {
    const auto c = solve(Kernel::ingham(), RhsSpec::delta(), 10000, Backend::exact);
    const auto closed = delta_coeff_closed(table, 10000);
    for (std::int64_t n = 1; n <= 10000; ++n)
      if (c.exact_n_a(n) != Rational(closed[n])) return {false, "closed form mismatch at n=" + std::to_string(n)};
    std::vector<std::int64_t> cps;
    for (std::int64_t j = 1; j <= 50; ++j) cps.push_back(200 * j);
    const auto s = partial_sums(c, cps);
    for (std::size_t j = 0; j < cps.size(); ++j) {
      const std::int64_t x = cps[j];
      if (s.A1_exact[j] != Rational(table.mertens(x) - table.mertens(x / 2)))
        return {false, "A1 != M(x)-M(x/2) at x=" + std::to_string(x)};
    }
    return {true, "closed form for n <= 10000; A1 identity at 50 checkpoints"};
  });
  run("l0-inverse", [&]() -> Outcome {
    const auto c = solve(Kernel::ingham(), RhsSpec::power_times_l0(1, l0_three_smooth(5000)), 5000, Backend::exact);
    for (std::int64_t k = 1; k <= 5000; ++k)
      if (c.exact(k) != Rational(table.mu(6 * k), k)) return {false, "a_k != mu(6k)/k at k=" + std::to_string(k)};
    return {true, "a_k = mu(6k)/k for k <= 5000"};
  });
  run("closed-vs-direct", [&]() -> Outcome {
    SolveOptions direct;
    direct.method = SolveOptions::Method::direct;
    for (int b : {0, 1, 2, 3}) {
      const auto c = solve(Kernel::ingham(), RhsSpec::power(b), 2000, Backend::exact, direct);
      const auto closed = ingham_coeff_closed_exact(table, b, 2000);
      for (std::int64_t n = 1; n <= 2000; ++n)
        if (c.exact_n_a(n) != closed[n]) return {false, "beta=" + std::to_string(b) + " mismatch at n=" + std::to_string(n)};
    }
    const auto c = solve(Kernel::ingham(), RhsSpec::power(0.5), 2000, Backend::floating, direct);
    const auto closed = ingham_coeff_closed(table, 0.5, 2000);
    double worst = 0;
    for (std::int64_t n = 1; n <= 2000; ++n)
      worst = std::max(worst, std::abs(c.n_a(n) - closed[n]) / std::max(1.0, std::abs(closed[n])));
    return {worst <= 1e-9, fmt("exact for beta in {0,1,2,3}; beta=0.5 max rel %.2e", worst)};
  });
}

void asymptotic_checks(Runner& run, const MobiusTable& table) {
  run("mellin-agreement", [&]() -> Outcome {
    double worst = 0;
    for (Complex z : {Complex(-0.5, 0), Complex(-1, 0), Complex(-2, 0), Complex(-1, 1)}) {
      const Complex c = closed_transform(Kernel::ingham(), z).value;
      const Complex l = limit_transform(Kernel::ingham(), z, 100000).value;
      worst = std::max(worst, std::abs(l - c) / std::abs(c));
    }
    const double pi2 = std::numbers::pi * std::numbers::pi / 12.0;
    const bool fixed = std::abs(closed_transform(Kernel::ingham(), 0.0).value - 1.0) < 1e-10 &&
                       std::abs(closed_transform(Kernel::ingham(), -1.0).value - pi2) < 1e-10;
    return {worst < 0.01 && fixed, fmt("max rel error %.2e at n=1e5", worst)};
  });
  run("zeta", [&]() -> Outcome {
    const double e2 = std::abs(zeta(2.0) - std::numbers::pi * std::numbers::pi / 6.0);
    const double z1 = std::abs(zeta(Complex(0.5, 14.134725)));
    return {e2 < 1e-12 && z1 < 1e-5, fmt("|zeta(2)-pi^2/6|=%.1e |zeta(rho1)|=%.1e", e2, z1)};
  });
  run("scaled-transform", [&]() -> Outcome {
    const auto r = limit_transform_wrt_f(Kernel::ingham(), FSpec::exp_plus_one(2), -1.0, 60);
    const double err = std::abs(r.value - 5.0 / 6.0);
    double worst_re = 0, worst_abs = 0;
    for (int q = 2; q <= 10; ++q) {
      const Kernel k = Kernel::scaled(Kernel::ingham(), FSpec::exp_plus_one(q));
      for (Complex z : phi_f_zeros(q, -50, 50)) {
        worst_re = std::max(worst_re, std::abs(z.real() - 0.5));
        worst_abs = std::max(worst_abs, std::abs(closed_transform(k, z).value));
      }
    }
    return {err < 1e-6 && worst_re < 1e-9 && worst_abs < 1e-9,
            fmt("limit err %.1e; zeros max |Re z - 1/2| %.1e", err, worst_re)};
  });
  run("regime", [&]() -> Outcome {
    Tolerances tol;
    tol.rule = Tolerances::MatchRule::tolerance;
    for (double b : {-1.0, 0.25}) {
      const auto v = regime_scan(Kernel::ingham(), b, 1000000, tol);
      if (v.verdict != Verdict::asymptotic_match) return {false, fmt("beta=%g not matched", b)};
    }
    for (double b : {0.75, 1.0, 2.0}) {
      const auto v = regime_scan(Kernel::ingham(), b, 1000000, tol);
      if (!(v.fitted_slope <= -0.35)) return {false, fmt("beta=%g slope %.3f", b, v.fitted_slope)};
    }
    return {true, "match for beta in {-1,0.25}; slope <= -0.35 for {0.75,1,2}"};
  });
  run("hlr", [&]() -> Outcome {
    const auto one = hlr_report(solve(Kernel::ingham(), RhsSpec::power(1), 100000, Backend::floating));
    if (one.sup_abs != 1.0) return {false, fmt("beta=1 sup %.17g", one.sup_abs)};
    for (double b : {0.25, 0.5, 2.0}) {
      const auto r = hlr_report(solve(Kernel::ingham(), RhsSpec::power(b), 100000, Backend::floating));
      if (!(r.growth_exponent < 0.05) || r.prime_tail_mean < -1.05 || r.prime_tail_mean > -0.95)
        return {false, fmt("beta=%g growth %.3f", b, r.growth_exponent) + fmt(" tail %.4f", r.prime_tail_mean)};
    }
    return {true, "sup=1 at beta=1; bounded growth and p a_p -> -1"};
  });
  run("jordan", [&]() -> Outcome {
    const auto r = jordan_partial_check(table, 0.25, 1000000);
    const double rel = std::abs(r.empirical_constant - r.predicted_constant) / std::abs(r.predicted_constant);
    return {std::abs(r.fitted_exponent - 0.75) <= 0.05 && rel <= 0.05,
            fmt("exponent %.4f, constant rel err %.2e", r.fitted_exponent, rel)};
  });
  run("mertens-ratio", [&]() -> Outcome {
    const auto r = mertens_ratio_report(table, 1000000);
    return {r.max_ratio < 1.0, fmt("max |M(x)|/sqrt(x) = %.4f at x=%.0f", r.max_ratio, static_cast<double>(r.argmax))};
  });
  run("ramanujan-l0", [&]() -> Outcome {
    const auto r = ramanujan_l0_compare(1000000);
    return {std::abs(r.ratios.back() - 1.0) <= 0.1 && r.non_worsening, fmt("ratio at 1e6 %.5f", r.ratios.back())};
  });
}

void full_checks(Runner& run) {
  run("index", [&]() -> Outcome {
    std::vector<double> g19, g514;
    for (int i = 1; i <= 9; ++i) g19.push_back(i / 10.0);
    for (int i = 5; i <= 14; ++i) g514.push_back(i / 10.0);
    const double a = estimate_index(Kernel::affine(0.5), g19, 20000).alpha_hat;
    const double l = estimate_index(Kernel::log(0.5), g19, 20000).alpha_hat;
    const double d = estimate_index(Kernel::disc(2), g514, 20000).alpha_hat;
    const double i = estimate_index(Kernel::ingham(), g19, 1000000).alpha_hat;
    const bool ok = a >= 0.4 && a <= 0.6 && l >= 0.4 && l <= 0.6 && d >= 0.85 && d <= 1.15 && i >= 0.35 && i <= 0.65;
    return {ok, fmt("affine %.3f log %.3f", a, l) + fmt(" disc %.3f ingham %.3f", d, i)};
  });
  run("count-oracles", [&]() -> Outcome {
    const auto table = sieve(30 * 2000);
    std::vector<CountSpec> specs;
    for (int m = 1; m <= 4; ++m) specs.push_back(CountSpec::coprime_tuples(m, 1));
    for (int p : {2, 3}) specs.push_back(CountSpec::p_free(p, 1));
    for (int p : {2, 3, 5}) specs.push_back(CountSpec::prime_powers(p, 1));
    for (auto P : std::vector<std::vector<int>>{{2}, {3}, {5}, {2, 3}, {2, 5}, {3, 5}, {2, 3, 5}})
      specs.push_back(CountSpec::smooth(P, 1));
    specs.push_back(CountSpec::elias_gamma(1));
    for (const auto& s : specs)
      for (std::int64_t n = 1; n <= 2000; ++n) {
        const auto sn = s.with_n(n);
        if (count_formula(sn, table) != count_oracle(sn)) return {false, sn.what() + " n=" + std::to_string(n)};
      }
    return {true, std::to_string(specs.size()) + " kinds, n <= 2000"};
  });
}

}  // namespace

Suite parse_suite(std::string_view text) {
  if (text == "exact") return Suite::exact;
  if (text == "asymptotic") return Suite::asymptotic;
  if (text == "full") return Suite::full;
  throw FormatError("unknown suite '" + std::string(text) + "'; expected exact | asymptotic | full");
}

std::vector<Check> run_suite(Suite suite, const std::filesystem::path& sieve_cache,
                             const std::function<void(const Check&)>& on_result) {
  std::vector<Check> out;
  Runner run(out, on_result);
  const std::int64_t limit = suite == Suite::exact ? 100000 : 1000000;
  const auto table = sieve_cached(limit, sieve_cache);
  exact_checks(run, table);
  if (suite != Suite::exact) asymptotic_checks(run, table);
  if (suite == Suite::full) full_checks(run);
  return out;
}

}  // namespace raf
