#include "raf/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>

#include "io.hpp"
#include "raf/asymptotics.hpp"
#include "raf/combinatorics.hpp"
#include "raf/error.hpp"
#include "raf/mellin.hpp"
#include "raf/sieve.hpp"
#include "raf/solver.hpp"
#include "raf/verify.hpp"

namespace raf {

namespace {

using nlohmann::json;
using cli::Csv;
using cli::num;

double to_double(std::string_view s, std::string_view what) {
  double v = 0;
  const char* first = s.data();
  if (!s.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw FormatError("bad number '" + std::string(s) + "' in " + std::string(what));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  for (std::size_t start = 0;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

Complex parse_complex(std::string_view s) {
  auto parts = split(s, ',');
  if (parts.size() == 1) return {to_double(parts[0], "--z"), 0.0};
  if (parts.size() == 2) return {to_double(parts[0], "--z"), to_double(parts[1], "--z")};
  throw FormatError("--z expects <re>,<im>");
}

/// "lo:hi:step" (inclusive) or an explicit comma list.
std::vector<double> parse_grid(std::string_view s, std::string_view what) {
  std::vector<double> out;
  if (s.find(':') == std::string_view::npos) {
    for (auto p : split(s, ',')) out.push_back(to_double(p, what));
    return out;
  }
  auto parts = split(s, ':');
  if (parts.size() != 3) throw FormatError(std::string(what) + " expects <lo>:<hi>:<step>");
  const double lo = to_double(parts[0], what), hi = to_double(parts[1], what), step = to_double(parts[2], what);
  if (!(step > 0) || hi < lo) throw FormatError(std::string(what) + " needs step > 0 and lo <= hi");
  for (long i = 0;; ++i) {
    double b = lo + static_cast<double>(i) * step;
    if (b > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
    out.push_back(std::round(b * 1e12) / 1e12);
  }
  return out;
}

std::pair<double, double> parse_interval(std::string_view s, std::string_view what) {
  auto parts = split(s, ':');
  if (parts.size() != 2) throw FormatError(std::string(what) + " expects <lo>:<hi>");
  return {to_double(parts[0], what), to_double(parts[1], what)};
}

std::string complex_str(Complex z) {
  return num(z.real()) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

struct Common {
  std::string out;
  bool json = false;
  std::string config;
  std::string sieve_cache;
};

class VerificationFailure : public Error {
 public:
  using Error::Error;
};

struct Ctx {
  std::ostream& out;
  std::ostream& err;
  std::string cmdline;
  Common common;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }

  /// Writes the CSV and manifest when --out was given.
  void emit(const Csv& csv, cli::Manifest m) const {
    if (common.out.empty()) return;
    cli::write_file(common.out, csv.str());
    m.cmd = cmdline;
    m.outputs = {common.out};
    m.wall_ms = elapsed_ms();
    cli::write_manifest(common.out, m);
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out, "Write results as CSV to this path (manifest alongside)");
  sub->add_flag("--json", c.json, "Print a JSON result object");
  sub->add_option("--config", c.config, "JSON file with option defaults");
  sub->add_option("--sieve-cache", c.sieve_cache, "Binary Möbius table cache");
}

cli::Manifest manifest(std::string kernel, std::string rhs, std::int64_t n, std::string backend,
                       json tolerances = json::object()) {
  cli::Manifest m;
  m.kernel = std::move(kernel);
  m.rhs = std::move(rhs);
  m.n = n;
  m.backend = std::move(backend);
  m.tolerances = std::move(tolerances);
  return m;
}

json tolerances_json(const Tolerances& t) {
  json j{{"const_tol", t.const_tol}, {"rule", match_rule_name(t.rule)}};
  j["slope_tol"] = t.slope_tol ? json(*t.slope_tol) : json("default");
  return j;
}

json verdict_json(const RegimeVerdict& v) {
  json j{{"beta", v.beta},
         {"slope", v.fitted_slope},
         {"stderr", v.slope_stderr},
         {"emp_const", v.empirical_constant},
         {"verdict", verdict_name(v.verdict)}};
  if (v.predicted_constant) {
    j["pred_const_re"] = v.predicted_constant->real();
    j["pred_const_im"] = v.predicted_constant->imag();
  } else {
    j["pred_const_re"] = nullptr;
    j["pred_const_im"] = nullptr;
  }
  j["deviation_trend"] = std::isfinite(v.deviation_trend) ? json(v.deviation_trend) : json(num(v.deviation_trend));
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Csv scan_csv(const std::vector<RegimeVerdict>& rows) {
  Csv csv({"beta", "slope", "stderr", "pred_const_re", "pred_const_im", "emp_const", "verdict"});
  for (const auto& v : rows) {
    const double re = v.predicted_constant ? v.predicted_constant->real() : std::nan("");
    const double im = v.predicted_constant ? v.predicted_constant->imag() : std::nan("");
    csv.row(v.beta, v.fitted_slope, v.slope_stderr, re, im, v.empirical_constant, verdict_name(v.verdict));
  }
  return csv;
}

// ---- subcommands ---------------------------------------------------------

struct SolveArgs {
  std::string kernel = "ingham", rhs = "power:1", backend = "float", method = "auto";
  std::int64_t n = 1000, generic_cap = 20000;
};

int cmd_solve(const Ctx& ctx, const SolveArgs& a) {
  const Kernel kernel = parse_kernel(a.kernel);
  const RhsSpec rhs = parse_rhs(a.rhs, a.n);
  const Backend backend = parse_backend(a.backend);
  SolveOptions opt;
  opt.generic_cap = a.generic_cap;
  if (a.method == "auto") opt.method = SolveOptions::Method::automatic;
  else if (a.method == "direct") opt.method = SolveOptions::Method::direct;
  else if (a.method == "divisor") opt.method = SolveOptions::Method::divisor;
  else throw FormatError("unknown method '" + a.method + "'; expected auto | direct | divisor");

  const auto coeffs = solve(kernel, rhs, a.n, backend, opt);
  const auto res = residual_check(coeffs);
  const bool ok = backend == Backend::exact ? res.exact_zero : res.max_scaled <= 1e-9;

  Csv csv(backend == Backend::exact ? std::vector<std::string>{"n", "a_num", "a_den"} : std::vector<std::string>{"n", "a_n"});
  for (std::int64_t n = 1; n <= a.n; ++n) {
    if (backend == Backend::exact) csv.row(n, coeffs.exact(n).numerator(), coeffs.exact(n).denominator());
    else csv.row(n, coeffs.value(n));
  }
  ctx.emit(csv, manifest(kernel.spec(), rhs.spec(), a.n, std::string(backend_name(backend)), json{{"residual", backend == Backend::exact ? json(0) : json(1e-9)}}));

  if (ctx.common.json) {
    json j{{"kernel", kernel.spec()}, {"rhs", rhs.spec()}, {"n", a.n}, {"backend", backend_name(backend)},
           {"residual_ok", ok}, {"residual_max_scaled", res.max_scaled}};
    json rows = json::array();
    for (std::int64_t n = 1; n <= a.n; ++n) {
      if (backend == Backend::exact)
        rows.push_back({{"n", n}, {"a_num", coeffs.exact(n).numerator()}, {"a_den", coeffs.exact(n).denominator()}});
      else
        rows.push_back({{"n", n}, {"a_n", coeffs.value(n)}});
    }
    j["rows"] = std::move(rows);
    ctx.out << j.dump() << "\n";
  } else {
    ctx.out << "kernel=" << kernel.spec() << " rhs=" << rhs.spec() << " n=" << a.n << " backend=" << backend_name(backend)
            << "\n";
    const std::int64_t show = std::min<std::int64_t>(a.n, 10);
    for (std::int64_t n = 1; n <= show; ++n)
      ctx.out << "a_" << n << " = " << (backend == Backend::exact ? coeffs.exact(n).str() : num(coeffs.value(n))) << "\n";
    if (a.n > show)
      ctx.out << "a_" << a.n << " = " << (backend == Backend::exact ? coeffs.exact(a.n).str() : num(coeffs.value(a.n))) << "\n";
    ctx.out << "residual " << (ok ? "ok" : "FAILED") << " (max scaled " << num(res.max_scaled) << " at n=" << res.worst_n
            << ")\n";
  }
  if (!ok) throw VerificationFailure("residual check failed at n=" + std::to_string(res.worst_n));
  return 0;
}

struct TolArgs {
  std::optional<double> slope_tol;
  double const_tol = 0.05;
  std::string rule = "converging";
  Tolerances get() const {
    Tolerances t;
    t.slope_tol = slope_tol;
    t.const_tol = const_tol;
    t.rule = parse_match_rule(rule);
    return t;
  }
};

void add_tol(CLI::App* sub, TolArgs& t) {
  sub->add_option("--slope-tol", t.slope_tol, "Slope tolerance (default depends on beta)");
  sub->add_option("--const-tol", t.const_tol, "Relative constant tolerance");
  sub->add_option("--rule", t.rule, "Match rule: tolerance | converging");
}

struct ScanArgs {
  std::string kernel = "ingham", betas = "-1:1:0.25";
  std::int64_t n = 20000, generic_cap = 20000;
  TolArgs tol;
};

int cmd_scan(const Ctx& ctx, const ScanArgs& a) {
  const Kernel kernel = parse_kernel(a.kernel);
  const auto betas = parse_grid(a.betas, "--betas");
  const Tolerances tol = a.tol.get();
  SolveOptions opt;
  opt.generic_cap = a.generic_cap;
  std::vector<std::future<RegimeVerdict>> jobs;
  for (double b : betas) jobs.push_back(std::async(std::launch::async, [&, b] { return regime_scan(kernel, b, a.n, tol, opt); }));
  std::vector<RegimeVerdict> rows;
  for (auto& j : jobs) rows.push_back(j.get());

  ctx.emit(scan_csv(rows), manifest(kernel.spec(), "power:" + a.betas, a.n, "float", tolerances_json(tol)));
  if (ctx.common.json) {
    json j{{"kernel", kernel.spec()}, {"n", a.n}, {"tolerances", tolerances_json(tol)}, {"rows", json::array()}};
    for (const auto& v : rows) j["rows"].push_back(verdict_json(v));
    ctx.out << j.dump() << "\n";
  } else {
    for (const auto& v : rows) {
      ctx.out << "beta=" << num(v.beta) << " slope=" << num(v.fitted_slope) << " emp_const=" << num(v.empirical_constant)
              << " pred_const=" << (v.predicted_constant ? complex_str(*v.predicted_constant) : std::string("n/a"))
              << " verdict=" << verdict_name(v.verdict) << "\n";
    }
  }
  return 0;
}

struct IndexArgs {
  std::string kernel = "ingham", grid = "0.1:0.9:0.1";
  std::int64_t n = 20000, generic_cap = 20000;
  int steps = 6;
  TolArgs tol;
};

int cmd_index(const Ctx& ctx, const IndexArgs& a) {
  const Kernel kernel = parse_kernel(a.kernel);
  const auto grid = parse_grid(a.grid, "--grid");
  const Tolerances tol = a.tol.get();
  IndexOptions opt;
  opt.bisection_steps = a.steps;
  opt.solve.generic_cap = a.generic_cap;
  const auto est = estimate_index(kernel, grid, a.n, tol, opt);

  auto rows = est.grid;
  rows.insert(rows.end(), est.refinements.begin(), est.refinements.end());
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.beta < y.beta; });
  json tj = tolerances_json(tol);
  ctx.emit(scan_csv(rows), manifest(kernel.spec(), "power:" + a.grid, a.n, "float", tj));
  if (ctx.common.json) {
    json j{{"kernel", kernel.spec()}, {"n", a.n},          {"alpha_hat", est.alpha_hat}, {"beta_lo", est.beta_lo},
           {"beta_hi", est.beta_hi},  {"tolerances", tj}, {"unproven", est.unproven},   {"rows", json::array()}};
    for (const auto& v : rows) j["rows"].push_back(verdict_json(v));
    ctx.out << j.dump() << "\n";
  } else {
    ctx.out << "kernel=" << kernel.spec() << " n=" << a.n << " alpha_hat=" << num(est.alpha_hat) << " bracket=["
            << num(est.beta_lo) << "," << num(est.beta_hi) << "]\n";
    if (est.unproven) ctx.out << "note: the index of this kernel is conjectural\n";
  }
  return 0;
}

struct HlrArgs {
  std::string kernel = "ingham", backend = "float";
  double beta = 1.0;
  std::int64_t n = 100000, generic_cap = 20000;
};

int cmd_hlr(const Ctx& ctx, const HlrArgs& a) {
  if (a.beta < 0) throw DomainError("hlr needs beta >= 0");
  const Kernel kernel = parse_kernel(a.kernel);
  SolveOptions opt;
  opt.generic_cap = a.generic_cap;
  const auto coeffs = solve(kernel, RhsSpec::power(a.beta), a.n, parse_backend(a.backend), opt);
  const auto r = hlr_report(coeffs);
  Csv csv({"beta", "sup_abs", "sup_at", "growth_exponent", "growth_stderr", "prime_tail_mean", "primes_used"});
  csv.row(a.beta, r.sup_abs, r.sup_at, r.growth_exponent, r.growth_stderr, r.prime_tail_mean, r.primes_used);
  ctx.emit(csv, manifest(kernel.spec(), RhsSpec::power(a.beta).spec(), a.n, a.backend));
  if (ctx.common.json) {
    ctx.out << json{{"kernel", kernel.spec()},    {"beta", a.beta},
                    {"n", a.n},                   {"sup_abs", r.sup_abs},
                    {"sup_at", r.sup_at},         {"growth_exponent", r.growth_exponent},
                    {"growth_stderr", r.growth_stderr}, {"prime_tail_mean", r.prime_tail_mean},
                    {"primes_used", r.primes_used}}
                   .dump()
            << "\n";
  } else {
    ctx.out << "sup|n a_n| = " << num(r.sup_abs) << " at n=" << r.sup_at << "\n"
            << "growth exponent = " << num(r.growth_exponent) << " +- " << num(r.growth_stderr) << "\n"
            << "mean p a_p over " << r.primes_used << " largest primes = " << num(r.prime_tail_mean) << "\n";
  }
  return 0;
}

struct MellinArgs {
  std::string kernel = "ingham", z, method = "closed", f;
  std::int64_t n = 100000;
};

int cmd_mellin(const Ctx& ctx, const MellinArgs& a) {
  const Kernel kernel = parse_kernel(a.kernel);
  const Complex z = parse_complex(a.z);
  TransformResult r;
  if (a.method == "closed") {
    if (!a.f.empty()) r = closed_transform(Kernel::scaled(kernel, parse_fspec(a.f)), z);
    else r = closed_transform(kernel, z);
  } else if (a.method == "limit") {
    r = a.f.empty() ? limit_transform(kernel, z, a.n) : limit_transform_wrt_f(kernel, parse_fspec(a.f), z, a.n);
  } else {
    throw FormatError("unknown method '" + a.method + "'; expected closed | limit");
  }
  Csv csv({"kernel", "z_re", "z_im", "method", "n", "value_re", "value_im", "change_2n"});
  const double change = r.convergence ? r.convergence->change : std::nan("");
  const std::string kspec = a.f.empty() ? kernel.spec() : "scaled:" + kernel.spec() + ":" + parse_fspec(a.f).spec();
  csv.row(kspec, z.real(), z.imag(), a.method, r.n, r.value.real(), r.value.imag(), change);
  ctx.emit(csv, manifest(kspec, "", r.n, "float"));
  if (ctx.common.json) {
    json j{{"kernel", kspec},          {"z_re", z.real()},       {"z_im", z.imag()},   {"method", a.method},
           {"value_re", r.value.real()}, {"value_im", r.value.imag()}};
    if (r.convergence) {
      j["n"] = r.n;
      j["at_2n_re"] = r.convergence->at_2n.real();
      j["at_2n_im"] = r.convergence->at_2n.imag();
      j["change_2n"] = change;
    }
    if (!r.condition_note.empty()) j["note"] = r.condition_note;
    ctx.out << j.dump() << "\n";
  } else {
    ctx.out << "kernel=" << kspec << " z=" << complex_str(z) << " method=" << a.method << " value=" << complex_str(r.value)
            << "\n";
    if (r.convergence)
      ctx.out << "n=" << r.n << " value(2n)=" << complex_str(r.convergence->at_2n) << " change=" << num(change) << "\n";
    if (!r.condition_note.empty()) ctx.out << "note: " << r.condition_note << "\n";
  }
  return 0;
}

struct ZerosArgs {
  int q = 2;
  std::string im = "-10:10";
};

int cmd_zeros(const Ctx& ctx, const ZerosArgs& a) {
  const auto [lo, hi] = parse_interval(a.im, "--im");
  const auto zeros = phi_f_zeros(a.q, lo, hi);
  const Kernel k = Kernel::scaled(Kernel::ingham(), FSpec::exp_plus_one(a.q));
  Csv csv({"q", "re", "im", "abs_value"});
  json rows = json::array();
  for (Complex z : zeros) {
    const double v = std::abs(closed_transform(k, z).value);
    csv.row(a.q, z.real(), z.imag(), v);
    rows.push_back({{"q", a.q}, {"re", z.real()}, {"im", z.imag()}, {"abs_value", v}});
  }
  ctx.emit(csv, manifest(k.spec(), "", 0, "float"));
  if (ctx.common.json) {
    ctx.out << json{{"q", a.q}, {"zeros", rows}}.dump() << "\n";
  } else {
    for (const auto& r : rows)
      ctx.out << "z=" << complex_str({r["re"].get<double>(), r["im"].get<double>()}) << " |F(z)|=" << num(r["abs_value"].get<double>())
              << "\n";
    ctx.out << zeros.size() << " zeros\n";
  }
  return 0;
}

struct CountArgs {
  std::string what;
  std::int64_t n = 100;
  bool oracle = false;
};

int cmd_count(const Ctx& ctx, const CountArgs& a) {
  const auto spec = parse_count(a.what, a.n);
  std::int64_t limit = a.n;
  if (spec.kind() == CountSpec::Kind::smooth || spec.kind() == CountSpec::Kind::prime_powers) limit = a.n * spec.modulus();
  const auto table = sieve_cached(limit, ctx.common.sieve_cache);
  const std::int64_t f = count_formula(spec, table);
  std::optional<std::int64_t> o;
  if (a.oracle) o = count_oracle(spec);
  const bool match = !o || *o == f;
  Csv csv({"what", "n", "formula", "oracle", "match"});
  csv.row(spec.what(), a.n, f, o ? std::to_string(*o) : std::string(""), match);
  ctx.emit(csv, manifest("", spec.what(), a.n, "exact"));
  if (ctx.common.json) {
    json j{{"what", spec.what()}, {"n", a.n}, {"formula", f}};
    if (o) {
      j["oracle"] = *o;
      j["match"] = match;
    }
    ctx.out << j.dump() << "\n";
  } else {
    ctx.out << "formula=" << f;
    if (o) ctx.out << " oracle=" << *o << " match=" << (match ? "true" : "false");
    ctx.out << "\n";
  }
  if (!match) throw VerificationFailure("formula and oracle disagree");
  return 0;
}

struct JordanArgs {
  double beta = 0.25, exp_tol = 0.05, const_tol = 0.05;
  std::int64_t x = 1000000;
};

int cmd_jordan(const Ctx& ctx, const JordanArgs& a) {
  const auto table = sieve_cached(a.x, ctx.common.sieve_cache);
  const auto r = jordan_partial_check(table, a.beta, a.x);
  const double rel = std::abs(r.empirical_constant - r.predicted_constant) / std::abs(r.predicted_constant);
  const bool ok = std::abs(r.fitted_exponent - (1.0 - a.beta)) <= a.exp_tol && rel <= a.const_tol;
  Csv csv({"x", "sum"});
  for (std::size_t j = 0; j < r.checkpoints.size(); ++j) csv.row(r.checkpoints[j], r.sums[j]);
  ctx.emit(csv, manifest("", "jordan:" + num(a.beta), a.x, "float", json{{"exponent", a.exp_tol}, {"const_tol", a.const_tol}}));
  if (ctx.common.json) {
    ctx.out << json{{"beta", a.beta},
                    {"x", a.x},
                    {"fitted_exponent", r.fitted_exponent},
                    {"exponent_stderr", r.exponent_stderr},
                    {"empirical_constant", r.empirical_constant},
                    {"predicted_constant", r.predicted_constant},
                    {"ok", ok}}
                   .dump()
            << "\n";
  } else {
    ctx.out << "exponent=" << num(r.fitted_exponent) << " (expected " << num(1.0 - a.beta) << ")\n"
            << "constant=" << num(r.empirical_constant) << " predicted=" << num(r.predicted_constant) << " rel_err=" << num(rel)
            << "\n"
            << (ok ? "ok" : "FAILED") << "\n";
  }
  if (!ok) throw VerificationFailure("Jordan sum outside tolerance");
  return 0;
}

struct MertensArgs {
  std::int64_t x = 1000000;
};

int cmd_mertens(const Ctx& ctx, const MertensArgs& a) {
  const auto table = sieve_cached(a.x, ctx.common.sieve_cache);
  const auto r = mertens_ratio_report(table, a.x);
  Csv csv({"x", "max_ratio", "argmax"});
  csv.row(a.x, r.max_ratio, r.argmax);
  ctx.emit(csv, manifest("", "", a.x, "exact"));
  if (ctx.common.json)
    ctx.out << json{{"x", a.x}, {"max_ratio", r.max_ratio}, {"argmax", r.argmax}}.dump() << "\n";
  else
    ctx.out << "max |M(x)|/sqrt(x) = " << num(r.max_ratio) << " at x=" << r.argmax << "\n";
  return 0;
}

struct VerifyArgs {
  std::string suite = "exact";
};

int cmd_verify(const Ctx& ctx, const VerifyArgs& a) {
  const Suite suite = parse_suite(a.suite);
  auto print = [&](const Check& c) {
    if (!ctx.common.json)
      ctx.out << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << num(std::round(c.seconds * 100) / 100) << " s) " << c.detail
              << std::endl;
  };
  const auto checks = run_suite(suite, ctx.common.sieve_cache, print);
  Csv csv({"check", "passed", "seconds", "detail"});
  json rows = json::array();
  bool all = true;
  for (const auto& c : checks) {
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    csv.row(c.name, c.passed, c.seconds, detail);
    rows.push_back({{"check", c.name}, {"passed", c.passed}, {"seconds", c.seconds}, {"detail", c.detail}});
    all = all && c.passed;
  }
  ctx.emit(csv, manifest("", "", 0, "", json{{"suite", a.suite}}));
  if (ctx.common.json) ctx.out << json{{"suite", a.suite}, {"passed", all}, {"checks", rows}}.dump() << "\n";
  else ctx.out << (all ? "all checks passed" : "some checks FAILED") << "\n";
  if (!all) throw VerificationFailure("verification suite failed");
  return 0;
}

// ---- config --------------------------------------------------------------

std::optional<std::string> find_value(const std::vector<std::string>& args, const std::string& flag) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind(flag + "=", 0) == 0) return args[i].substr(flag.size() + 1);
  }
  return std::nullopt;
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Appends options from the --config JSON file that are not already on the command line.
void apply_config(CLI::App& app, std::vector<std::string>& args) {
  const auto path = find_value(args, "--config");
  if (!path) return;
  CLI::App* sub = nullptr;
  for (const auto& a : args)
    if (auto* s = app.get_subcommand_no_throw(a)) {
      sub = s;
      break;
    }
  if (!sub) return;
  std::ifstream f(*path);
  if (!f) throw cli::IoError("cannot read config file '" + *path + "'");
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::exception& e) {
    throw FormatError("config file '" + *path + "' is not valid JSON: " + e.what());
  }
  if (!cfg.is_object()) throw FormatError("config file must hold a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    const std::string flag = "--" + key;
    if (key == "config" || has_flag(args, flag)) continue;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (!opt) continue;  // keys for other subcommands are ignored
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (const auto& v : value) text += (text.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
    } else {
      text = value.dump();
    }
    args.push_back(flag);
    args.push_back(text);
  }
}

}  // namespace

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  CLI::App app{"raf: regular arithmetic function laboratory", "raf"};
  app.set_version_flag("--version", RAF_VERSION);
  app.require_subcommand(1);

  Common common;
  SolveArgs solve_a;
  auto* s_solve = app.add_subcommand("solve", "Solve for the coefficients a_n");
  s_solve->add_option("--kernel", solve_a.kernel, std::string(kernel_grammar()));
  s_solve->add_option("--rhs", solve_a.rhs, "power:<beta> | delta | l0pow:<beta>");
  s_solve->add_option("--n", solve_a.n, "Number of coefficients");
  s_solve->add_option("--backend", solve_a.backend, "exact | float");
  s_solve->add_option("--method", solve_a.method, "auto | direct | divisor");
  s_solve->add_option("--generic-cap", solve_a.generic_cap, "Largest N for O(N^2) forward substitution");

  ScanArgs scan_a;
  auto* s_scan = app.add_subcommand("scan", "Regime verdicts over a beta range");
  s_scan->add_option("--kernel", scan_a.kernel, std::string(kernel_grammar()));
  s_scan->add_option("--betas", scan_a.betas, "<lo>:<hi>:<step> or a comma list");
  s_scan->add_option("--n", scan_a.n, "Solve limit");
  s_scan->add_option("--generic-cap", scan_a.generic_cap, "Largest N for O(N^2) forward substitution");
  add_tol(s_scan, scan_a.tol);

  IndexArgs index_a;
  auto* s_index = app.add_subcommand("index", "Estimate the regularity index");
  s_index->add_option("--kernel", index_a.kernel, std::string(kernel_grammar()));
  s_index->add_option("--grid", index_a.grid, "<lo>:<hi>:<step> or a comma list");
  s_index->add_option("--n", index_a.n, "Solve limit");
  s_index->add_option("--steps", index_a.steps, "Bisection steps");
  s_index->add_option("--generic-cap", index_a.generic_cap, "Largest N for O(N^2) forward substitution");
  add_tol(s_index, index_a.tol);

  HlrArgs hlr_a;
  auto* s_hlr = app.add_subcommand("hlr", "Boundedness report for n*a_n");
  s_hlr->add_option("--kernel", hlr_a.kernel, std::string(kernel_grammar()));
  s_hlr->add_option("--beta", hlr_a.beta, "RHS exponent (>= 0)");
  s_hlr->add_option("--n", hlr_a.n, "Solve limit");
  s_hlr->add_option("--backend", hlr_a.backend, "exact | float");
  s_hlr->add_option("--generic-cap", hlr_a.generic_cap, "Largest N for O(N^2) forward substitution");

  MellinArgs mellin_a;
  auto* s_mellin = app.add_subcommand("mellin", "Evaluate a Mellin transform");
  s_mellin->add_option("--kernel", mellin_a.kernel, std::string(kernel_grammar()));
  s_mellin->add_option("--z", mellin_a.z, "<re>,<im>")->required();
  s_mellin->add_option("--method", mellin_a.method, "closed | limit");
  s_mellin->add_option("--n", mellin_a.n, "Truncation for the limit method");
  s_mellin->add_option("--f", mellin_a.f, "Rescaling: id | pow:<r> | exp:<q>");

  ZerosArgs zeros_a;
  auto* s_zeros = app.add_subcommand("zeros", "Zeros of the exp-scaled Ingham transform");
  s_zeros->add_option("--q", zeros_a.q, "Integer base q >= 2")->required();
  s_zeros->add_option("--im", zeros_a.im, "<lo>:<hi> range of imaginary parts");

  CountArgs count_a;
  auto* s_count = app.add_subcommand("count", "Floor/Möbius counting identities");
  s_count->add_option("--what", count_a.what, "coprime:<m> | pfree:<p> | ppow:<p> | smooth:<p,...> | elias")->required();
  s_count->add_option("--n", count_a.n, "Upper bound");
  s_count->add_flag("--oracle", count_a.oracle, "Also run the brute-force oracle");

  JordanArgs jordan_a;
  auto* s_jordan = app.add_subcommand("jordan", "Partial sums of the Jordan function J_{-beta}");
  s_jordan->add_option("--beta", jordan_a.beta, "0 < beta < 1/2");
  s_jordan->add_option("--x", jordan_a.x, "Upper bound");
  s_jordan->add_option("--exp-tol", jordan_a.exp_tol, "Exponent tolerance");
  s_jordan->add_option("--const-tol", jordan_a.const_tol, "Relative constant tolerance");

  MertensArgs mertens_a;
  auto* s_mertens = app.add_subcommand("mertens", "max |M(x)|/sqrt(x)");
  s_mertens->add_option("--x", mertens_a.x, "Upper bound");

  VerifyArgs verify_a;
  auto* s_verify = app.add_subcommand("verify", "Run a verification suite");
  s_verify->add_option("--suite", verify_a.suite, "exact | asymptotic | full");

  for (auto* sub : app.get_subcommands({})) add_common(sub, common);

  std::string cmdline = "raf";
  for (const auto& a : input) cmdline += " " + a;

  try {
    std::vector<std::string> args = input;
    apply_config(app, args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  Ctx ctx{out, err, cmdline, common};
  try {
    if (s_solve->parsed()) return cmd_solve(ctx, solve_a);
    if (s_scan->parsed()) return cmd_scan(ctx, scan_a);
    if (s_index->parsed()) return cmd_index(ctx, index_a);
    if (s_hlr->parsed()) return cmd_hlr(ctx, hlr_a);
    if (s_mellin->parsed()) return cmd_mellin(ctx, mellin_a);
    if (s_zeros->parsed()) return cmd_zeros(ctx, zeros_a);
    if (s_count->parsed()) return cmd_count(ctx, count_a);
    if (s_jordan->parsed()) return cmd_jordan(ctx, jordan_a);
    if (s_mertens->parsed()) return cmd_mertens(ctx, mertens_a);
    if (s_verify->parsed()) return cmd_verify(ctx, verify_a);
  } catch (const VerificationFailure& e) {
    err << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const BracketError& e) {
    err << "index estimation failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return 2;
  }
  return 2;
}

}  // namespace raf
