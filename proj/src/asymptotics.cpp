#include "raf/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "raf/error.hpp"
#include "raf/summation.hpp"

namespace raf {

std::vector<std::int64_t> default_checkpoints(std::int64_t N) {
  if (N < 4) throw DomainError("at least 4 checkpoints are needed, so N must be >= 4");
  std::vector<std::int64_t> out;
  for (int j = 0;; ++j) {
    const auto x = static_cast<std::int64_t>(std::llround(100.0 * std::pow(1.25, j)));
    if (x > N) break;
    if (out.empty() || x != out.back()) out.push_back(x);
  }
  if (!out.empty() && out.back() != N) out.push_back(N);
  if (out.size() >= 4) return out;
  out.clear();
  const std::int64_t count = std::min<std::int64_t>(N, 16);
  for (std::int64_t i = 1; i <= count; ++i) {
    const std::int64_t x = (N * i) / count;
    if (out.empty() || x != out.back()) out.push_back(x);
  }
  return out;
}

namespace {

std::optional<ExponentFit> ols(const std::vector<double>& lx, const std::vector<double>& ly) {
  const auto n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0) return std::nullopt;
  ExponentFit fit;
  fit.slope = sxy / sxx;
  const double intercept = my - fit.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + fit.slope * lx[i]);
    ssr += r * r;
  }
  fit.std_error = lx.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
  return fit;
}

std::optional<ExponentFit> envelope_fit(const std::vector<double>& lx, std::vector<double> env) {
  std::vector<double> ly(env.size());
  for (std::size_t i = 0; i < env.size(); ++i) {
    if (env[i] <= 0.0) return std::nullopt;
    ly[i] = std::log(env[i]);
  }
  return ols(lx, ly);
}

double quartile_mean(const std::vector<double>& v, std::size_t from) {
  double s = 0;
  for (std::size_t i = from; i < v.size(); ++i) s += v[i];
  return s / static_cast<double>(v.size() - from);
}

}  // namespace

ExponentFit fit_exponent(const std::vector<std::int64_t>& x, const std::vector<double>& values) {
  if (x.size() != values.size()) throw DomainError("checkpoints and values differ in length");
  if (x.size() < 4) throw DomainError("fit_exponent needs at least 4 checkpoints");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 1 || (i && x[i] <= x[i - 1])) throw DomainError("checkpoints must be positive and strictly increasing");
    if (!std::isfinite(values[i])) throw DomainError("series values must be finite");
  }
  const std::size_t h = x.size() / 2;
  std::vector<double> lx, fwd, bwd;
  for (std::size_t i = h; i < x.size(); ++i) {
    lx.push_back(std::log(static_cast<double>(x[i])));
    fwd.push_back(std::abs(values[i]));
  }
  if (std::all_of(fwd.begin(), fwd.end(), [](double v) { return v == 0.0; }))
    throw DegenerateSeriesError("series tail is identically zero");
  bwd = fwd;
  for (std::size_t i = 1; i < fwd.size(); ++i) fwd[i] = std::max(fwd[i], fwd[i - 1]);
  for (std::size_t i = bwd.size() - 1; i-- > 0;) bwd[i] = std::max(bwd[i], bwd[i + 1]);
  auto grow = envelope_fit(lx, fwd);
  auto decay = envelope_fit(lx, bwd);
  if (grow && decay) return std::abs(decay->slope) > std::abs(grow->slope) ? *decay : *grow;
  if (grow) return *grow;
  if (decay) return *decay;
  throw DegenerateSeriesError("series envelope vanishes on the upper half of the checkpoints");
}

ExponentFit fit_exponent(const PartialSumSeries& series, SeriesField which) {
  const auto& values = which == SeriesField::A ? series.A : series.A1;
  const auto& peaks = which == SeriesField::A ? series.A_peak : series.A1_peak;
  // Peaks between checkpoints catch the oscillation maxima the sparse grid misses.
  if (peaks.size() == values.size()) return fit_exponent(series.checkpoints, peaks);
  return fit_exponent(series.checkpoints, values);
}

double default_slope_tol(double beta) {
  const double b = std::abs(beta);
  if (b <= 0.5) return 0.05;
  if (b >= 1.0) return 0.1;
  return 0.05 + (b - 0.5) * 0.1;
}

std::string_view match_rule_name(Tolerances::MatchRule rule) {
  return rule == Tolerances::MatchRule::tolerance ? "tolerance" : "converging";
}

Tolerances::MatchRule parse_match_rule(std::string_view text) {
  if (text == "tolerance") return Tolerances::MatchRule::tolerance;
  if (text == "converging") return Tolerances::MatchRule::converging;
  throw FormatError("unknown match rule '" + std::string(text) + "'; expected tolerance | converging");
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::asymptotic_match: return "asymptotic_match";
    case Verdict::power_mismatch: return "power_mismatch";
    case Verdict::bounded_decay: return "bounded_decay";
  }
  return "";
}

bool RegimeVerdict::matches(const Tolerances& tol) const {
  if (verdict == Verdict::asymptotic_match) return true;
  return tol.rule == Tolerances::MatchRule::converging && predicted_constant && deviation_trend < 0.0;
}

RegimeVerdict regime_check(const PartialSumSeries& series, double beta, const Kernel& kernel, const Tolerances& tol) {
  if (!std::isfinite(beta)) throw DomainError("regime_check needs a finite beta");
  const auto& x = series.checkpoints;
  const auto fit = fit_exponent(series, SeriesField::A);
  RegimeVerdict v;
  v.beta = beta;
  v.fitted_slope = fit.slope;
  v.slope_stderr = fit.std_error;

  const std::size_t J = x.size();
  const std::size_t q2 = J / 2, q3 = (3 * J) / 4;
  std::vector<double> scaled(J);
  for (std::size_t j = 0; j < J; ++j) scaled[j] = series.A[j] * std::pow(static_cast<double>(x[j]), beta);
  v.empirical_constant = quartile_mean(scaled, q3);

  try {
    const Complex t = closed_transform(kernel, Complex(beta, 0.0)).value;
    if (std::abs(t) < 1e-13)
      v.note = "transform vanishes at beta; constant comparison skipped";
    else
      v.predicted_constant = 1.0 / t;
  } catch (const PoleError& e) {
    v.note = std::string("transform pole at beta; constant comparison skipped (") + e.what() + ")";
  } catch (const UnsupportedError& e) {
    v.note = std::string("no closed transform; constant comparison skipped (") + e.what() + ")";
  }

  const bool slope_ok = std::abs(fit.slope + beta) <= tol.slope_for(beta);
  bool const_ok = false;
  if (v.predicted_constant) {
    const Complex pred = *v.predicted_constant;
    const_ok = std::abs(Complex(v.empirical_constant, 0.0) - pred) <= tol.const_tol * std::abs(pred);
    double m3 = 0, m4 = 0, g3 = 0, g4 = 0;
    for (std::size_t j = q2; j < J; ++j) {
      const double dev = std::abs(Complex(scaled[j], 0.0) / pred - 1.0);
      const double lx = std::log(static_cast<double>(x[j]));
      if (j < q3) {
        m3 = std::max(m3, dev);
        g3 += lx;
      } else {
        m4 = std::max(m4, dev);
        g4 += lx;
      }
    }
    g3 /= static_cast<double>(q3 - q2);
    g4 /= static_cast<double>(J - q3);
    if (m4 == 0.0) v.deviation_trend = -std::numeric_limits<double>::infinity();
    else if (m3 == 0.0) v.deviation_trend = std::numeric_limits<double>::infinity();
    else v.deviation_trend = std::log(m4 / m3) / (g4 - g3);
  } else {
    v.deviation_trend = std::numeric_limits<double>::quiet_NaN();
  }

  if (slope_ok && const_ok) v.verdict = Verdict::asymptotic_match;
  else if (fit.slope < 0.0) v.verdict = Verdict::bounded_decay;
  else v.verdict = Verdict::power_mismatch;
  return v;
}

RegimeVerdict regime_scan(const Kernel& kernel, double beta, std::int64_t N, const Tolerances& tol,
                          const SolveOptions& options) {
  const auto coeffs = solve(kernel, RhsSpec::power(beta), N, Backend::floating, options);
  return regime_check(partial_sums(coeffs, default_checkpoints(N)), beta, kernel, tol);
}

IndexEstimate estimate_index(const Kernel& kernel, const std::vector<double>& grid, std::int64_t N,
                             const Tolerances& tol, const IndexOptions& options) {
  if (grid.size() < 3) throw DomainError("estimate_index needs at least 3 grid points");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw DomainError("index grid must be strictly ascending");
  // Fail fast on capacity before spawning work.
  if (kernel.kind() != KernelKind::ingham && N > options.solve.generic_cap)
    throw CapacityError("generic kernels are capped at N = " + std::to_string(options.solve.generic_cap));

  IndexEstimate est;
  est.tolerances = tol;
  est.unproven = kernel.index_unproven();
  auto run = [&](double beta) { return regime_scan(kernel, beta, N, tol, options.solve); };
  if (options.parallel) {
    std::vector<std::future<RegimeVerdict>> jobs;
    for (double b : grid) jobs.push_back(std::async(std::launch::async, run, b));
    for (auto& j : jobs) est.grid.push_back(j.get());
  } else {
    for (double b : grid) est.grid.push_back(run(b));
  }

  std::size_t prefix = 0;
  while (prefix < est.grid.size() && est.grid[prefix].matches(tol)) ++prefix;
  if (prefix == 0)
    throw BracketError("no grid point matches; the index lies below beta = " + std::to_string(grid.front()));
  if (prefix == grid.size())
    throw BracketError("every grid point matches; the index lies above beta = " + std::to_string(grid.back()));
  double lo = grid[prefix - 1], hi = grid[prefix];
  for (int step = 0; step < options.bisection_steps; ++step) {
    const double mid = 0.5 * (lo + hi);
    auto v = run(mid);
    (v.matches(tol) ? lo : hi) = mid;
    est.refinements.push_back(std::move(v));
  }
  est.beta_lo = lo;
  est.beta_hi = hi;
  est.alpha_hat = 0.5 * (lo + hi);
  return est;
}

HLRReport hlr_report(const Coefficients& coeffs) {
  const std::int64_t N = coeffs.limit();
  HLRReport rep;
  const bool exact = coeffs.backend() == Backend::exact;
  auto na = [&](std::int64_t n) { return exact ? coeffs.exact_n_a(n).to_double() : coeffs.n_a(n); };

  std::vector<double> running(static_cast<std::size_t>(N) + 1, 0.0);
  for (std::int64_t n = 2; n <= N; ++n) {
    const double v = std::abs(na(n));
    if (v > rep.sup_abs) {
      rep.sup_abs = v;
      rep.sup_at = n;
    }
    running[n] = rep.sup_abs;
  }
  if (N >= 4 && rep.sup_abs > 0.0) {
    const auto cps = default_checkpoints(N);
    std::vector<double> env;
    for (auto x : cps) env.push_back(running[x]);
    try {
      const auto fit = fit_exponent(cps, env);
      rep.growth_exponent = fit.slope;
      rep.growth_stderr = fit.std_error;
    } catch (const DegenerateSeriesError&) {
      rep.growth_exponent = 0.0;
    }
  }
  if (N >= 2) {
    const auto table = sieve(N);
    auto primes = table.primes();
    const std::size_t take = std::min<std::size_t>(100, primes.size());
    double s = 0;
    for (std::size_t i = primes.size() - take; i < primes.size(); ++i) s += na(primes[i]);
    rep.primes_used = take;
    rep.prime_tail_mean = take ? s / static_cast<double>(take) : 0.0;
  }
  return rep;
}

namespace {

double jordan_with_prefix(const MobiusTable& table, const std::vector<double>& prefix, std::int64_t x) {
  CompensatedSum s;
  for (std::int64_t k = 1; k <= x;) {
    const std::int64_t q = x / k;
    const std::int64_t k2 = x / q;
    const std::int64_t m = table.mertens(q);
    if (m != 0) s.add(static_cast<double>(m) * (prefix[k2] - prefix[k - 1]));
    k = k2 + 1;
  }
  return s.value();
}

std::vector<double> power_prefix(double beta, std::int64_t x) {
  std::vector<double> p(static_cast<std::size_t>(x) + 1, 0.0);
  CompensatedSum acc;
  for (std::int64_t k = 1; k <= x; ++k) {
    acc.add(std::pow(static_cast<double>(k), -beta));
    p[k] = acc.value();
  }
  return p;
}

}  // namespace

double jordan_sum(const MobiusTable& table, double beta, std::int64_t x) {
  if (x < 1 || x > table.limit()) throw RangeError("jordan_sum needs 1 <= x <= table limit");
  return jordan_with_prefix(table, power_prefix(beta, x), x);
}

JordanReport jordan_partial_check(const MobiusTable& table, double beta, std::int64_t X) {
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("jordan_partial_check needs 0 < beta < 1/2");
  if (X > table.limit()) throw RangeError("jordan_partial_check needs X <= table limit");
  JordanReport rep;
  rep.beta = beta;
  rep.checkpoints = default_checkpoints(X);
  const auto prefix = power_prefix(beta, X);
  for (auto x : rep.checkpoints) rep.sums.push_back(jordan_with_prefix(table, prefix, x));
  const auto fit = fit_exponent(rep.checkpoints, rep.sums);
  rep.fitted_exponent = fit.slope;
  rep.exponent_stderr = fit.std_error;
  const std::size_t J = rep.checkpoints.size();
  std::vector<double> scaled(J);
  for (std::size_t j = 0; j < J; ++j) scaled[j] = rep.sums[j] * std::pow(static_cast<double>(rep.checkpoints[j]), beta - 1.0);
  rep.empirical_constant = quartile_mean(scaled, (3 * J) / 4);
  rep.predicted_constant = 1.0 / ((1.0 - beta) * zeta(Complex(1.0 - beta, 0.0)).real());
  return rep;
}

MertensRatio mertens_ratio_report(const MobiusTable& table, std::int64_t X) {
  if (X < 1 || X > table.limit()) throw RangeError("mertens_ratio_report needs 1 <= X <= table limit");
  MertensRatio r;
  if (X == 1) {
    r.max_ratio = 1.0;
    r.argmax = 1;
    return r;
  }
  r.max_ratio = -1.0;
  for (std::int64_t x = 2; x <= X; ++x) {
    const double v = std::abs(static_cast<double>(table.mertens(x))) / std::sqrt(static_cast<double>(x));
    if (v > r.max_ratio) {
      r.max_ratio = v;
      r.argmax = x;
    }
  }
  return r;
}

}  // namespace raf
