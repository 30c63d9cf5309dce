#include "raf/kernel.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "raf/error.hpp"

namespace raf {

namespace {

std::string fmt_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto first = s.data();
  auto last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
    throw FormatError("bad number '" + std::string(s) + "' in kernel spec; " + std::string(kernel_grammar()));
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

// 1/r as an integer s when r = 1/s; 0 otherwise.
std::int64_t reciprocal_integer(double r) {
  double s = 1.0 / r;
  double rs = std::round(s);
  if (rs >= 1.0 && std::abs(s - rs) < 1e-12 * rs) return static_cast<std::int64_t>(rs);
  return 0;
}

// Largest j with λ^j <= t for real λ > 1, t >= 1, robust at exact powers.
int disc_exponent(double t, double lambda) {
  const double ll = std::log(lambda);
  int j = static_cast<int>(std::floor(std::log(t) / ll));
  if (j < 0) j = 0;
  const double slack = 1.0 + 1e-13;
  while (j > 0 && std::pow(lambda, j) > t * slack) --j;
  while (std::pow(lambda, j + 1) <= t * slack) ++j;
  return j;
}

double ingham_real(double x) { return x * std::floor(1.0 / x); }

}  // namespace

// ---- FSpec ---------------------------------------------------------------

FSpec FSpec::power(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("power rescaling needs 0 < r <= 1");
  if (r == 1.0) return FSpec(Kind::power, 1.0, 0);
  return FSpec(Kind::power, r, 0);
}

FSpec FSpec::exp_plus_one(int q) {
  if (q < 2) throw DomainError("exp rescaling needs an integer base q >= 2");
  return FSpec(Kind::exp_plus_one, 0.0, q);
}

double FSpec::value(double x) const {
  switch (kind_) {
    case Kind::identity: return x;
    case Kind::power: return x <= 0.0 ? 0.0 : std::pow(x, r_);
    case Kind::exp_plus_one: return std::pow(static_cast<double>(q_), x) + 1.0;
  }
  return x;
}

double FSpec::log_value(std::int64_t n) const {
  const double x = static_cast<double>(n);
  switch (kind_) {
    case Kind::identity: return std::log(x);
    case Kind::power: return r_ * std::log(x);
    case Kind::exp_plus_one: {
      const double lq = std::log(static_cast<double>(q_));
      return x * lq + std::log1p(std::exp(-x * lq));
    }
  }
  return 0.0;
}

double FSpec::ingham_at(std::int64_t n, std::int64_t k) const {
  if (k == n) return 1.0;
  switch (kind_) {
    case Kind::identity: {
      const std::int64_t fl = n / k;
      return static_cast<double>(k) * static_cast<double>(fl) / static_cast<double>(n);
    }
    case Kind::power: {
      const double x = std::exp(r_ * std::log(static_cast<double>(k) / static_cast<double>(n)));
      std::int64_t fl;
      if (auto s = reciprocal_integer(r_); s > 0) {
        fl = integer_root(n / k, static_cast<int>(s));
      } else {
        const double y = std::pow(static_cast<double>(n) / static_cast<double>(k), r_);
        fl = static_cast<std::int64_t>(std::floor(y * (1.0 + 1e-14)));
      }
      return x * static_cast<double>(fl);
    }
    case Kind::exp_plus_one: {
      using u128 = unsigned __int128;
      const auto q = static_cast<u128>(q_);
      u128 qn = 1, qk = 1;
      bool fits = true;
      for (std::int64_t i = 0; i < n && fits; ++i) {
        if (qn > (~u128{0} >> 1) / q) fits = false;
        qn *= q;
        if (i < k) qk = qn;
      }
      if (fits) {
        const u128 fn = qn + 1, fk = qk + 1;
        return static_cast<double>(static_cast<long double>(fk) * static_cast<long double>(fn / fk) /
                                   static_cast<long double>(fn));
      }
      // q^n >= 2^127. For 2k >= n the floor is q^(n-k) - 1; otherwise f(k)/f(n) < 2^-63.
      if (2 * k < n) return 1.0;
      const double lq = std::log(static_cast<double>(q_));
      const double d = static_cast<double>(n - k) * lq;
      const double lk = std::log1p(std::exp(-static_cast<double>(k) * lq));
      const double ln = std::log1p(std::exp(-static_cast<double>(n) * lq));
      return std::exp(lk - ln) * -std::expm1(-d);
    }
  }
  return 0.0;
}

std::string FSpec::spec() const {
  switch (kind_) {
    case Kind::identity: return "id";
    case Kind::power: return "pow:" + fmt_double(r_);
    case Kind::exp_plus_one: return "exp:" + std::to_string(q_);
  }
  return "id";
}

// ---- Kernel --------------------------------------------------------------

Kernel Kernel::affine(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("affine kernel needs 0 < lambda < 1");
  return Kernel(kernels::Affine{lambda});
}

Kernel Kernel::log(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("log kernel needs 0 < lambda <= 1");
  return Kernel(kernels::Log{lambda});
}

Kernel Kernel::disc(double lambda) {
  if (!(lambda > 1.0) || !std::isfinite(lambda)) throw DomainError("disc kernel needs lambda > 1");
  return Kernel(kernels::Disc{lambda});
}

Kernel Kernel::rational_raf(double x, double y) {
  if (!(x > 0.0 && y > 0.0)) throw DomainError("ratraf kernel needs x > 0 and y > 0");
  if (x == y) throw DomainError("ratraf kernel needs x != y");
  return Kernel(kernels::RationalRaf{x, y});
}

Kernel Kernel::generalized_ingham(std::vector<double> weights) {
  if (weights.empty()) throw DomainError("generalized Ingham kernel needs at least one weight");
  for (double w : weights)
    if (!std::isfinite(w)) throw DomainError("generalized Ingham weights must be finite");
  return Kernel(kernels::GeneralizedIngham{std::move(weights)});
}

Kernel Kernel::scaled(const Kernel& base, FSpec f) {
  if (!base.is_fgv()) throw UnsupportedError("scaled kernel needs an FGV base, got '" + base.spec() + "'");
  return Kernel(kernels::Scaled{std::make_shared<const Kernel>(base), f});
}

bool Kernel::is_fgv() const noexcept {
  switch (kind()) {
    case KernelKind::rational_raf:
    case KernelKind::scaled: return false;
    default: return true;
  }
}

bool Kernel::index_unproven() const noexcept {
  if (auto d = std::get_if<kernels::Disc>(&v_)) return d->lambda != std::round(d->lambda);
  return false;
}

double Kernel::profile(double x) const {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("kernel profile is defined on (0,1]");
  return std::visit(
      [&](const auto& k) -> double {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, kernels::Ingham>) {
          return ingham_real(x);
        } else if constexpr (std::is_same_v<T, kernels::Affine>) {
          return (1.0 - k.lambda) * x + k.lambda;
        } else if constexpr (std::is_same_v<T, kernels::Log>) {
          return 1.0 - k.lambda * std::log(x);
        } else if constexpr (std::is_same_v<T, kernels::Disc>) {
          return x * std::pow(k.lambda, disc_exponent(1.0 / x, k.lambda));
        } else if constexpr (std::is_same_v<T, kernels::GeneralizedIngham>) {
          double s = 0.0;
          const auto jmax = static_cast<std::int64_t>(std::floor(1.0 / x));
          for (std::int64_t j = 1; j <= jmax; ++j) s += k.weight(j) / static_cast<double>(j) * ingham_real(static_cast<double>(j) * x);
          return s;
        } else {
          throw UnsupportedError("kernel '" + spec() + "' has no one-variable profile");
        }
      },
      v_);
}

std::string Kernel::spec() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, kernels::Ingham>) {
          return "ingham";
        } else if constexpr (std::is_same_v<T, kernels::Affine>) {
          return "affine:" + fmt_double(k.lambda);
        } else if constexpr (std::is_same_v<T, kernels::Log>) {
          return "log:" + fmt_double(k.lambda);
        } else if constexpr (std::is_same_v<T, kernels::Disc>) {
          return "disc:" + fmt_double(k.lambda);
        } else if constexpr (std::is_same_v<T, kernels::RationalRaf>) {
          return "ratraf:" + fmt_double(k.x) + "," + fmt_double(k.y);
        } else if constexpr (std::is_same_v<T, kernels::GeneralizedIngham>) {
          std::string s = "genin:";
          for (std::size_t i = 0; i < k.weights.size(); ++i) {
            if (i) s += ',';
            s += fmt_double(k.weights[i]);
          }
          return s;
        } else {
          return "scaled:" + k.base->spec() + ":" + k.f.spec();
        }
      },
      v_);
}

std::string_view kernel_grammar() {
  return "kernel grammar: ingham | affine:<lambda> | log:<lambda> | disc:<lambda> | ratraf:<x>,<y> | "
         "genin:<u1>,<u2>,... | scaled:<base>:exp:<q> | scaled:<base>:pow:<r> | scaled:<base>:id";
}

FSpec parse_fspec(std::string_view text) {
  if (text == "id" || text == "identity") return FSpec::identity();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw FormatError("bad rescaling '" + std::string(text) + "'; " + std::string(kernel_grammar()));
  auto head = text.substr(0, colon);
  auto arg = text.substr(colon + 1);
  if (head == "pow") return FSpec::power(parse_double(arg));
  if (head == "exp") {
    double q = parse_double(arg);
    if (q != std::round(q) || q < 2 || q > 1e6) throw DomainError("exp rescaling needs an integer base q >= 2");
    return FSpec::exp_plus_one(static_cast<int>(q));
  }
  throw FormatError("bad rescaling '" + std::string(text) + "'; " + std::string(kernel_grammar()));
}

Kernel parse_kernel(std::string_view text) {
  auto bad = [&]() { return FormatError("unknown kernel spec '" + std::string(text) + "'; " + std::string(kernel_grammar())); };
  if (text == "ingham") return Kernel::ingham();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) throw bad();
  auto head = text.substr(0, colon);
  auto rest = text.substr(colon + 1);
  if (head == "affine") return Kernel::affine(parse_double(rest));
  if (head == "log") return Kernel::log(parse_double(rest));
  if (head == "disc") return Kernel::disc(parse_double(rest));
  if (head == "ratraf") {
    auto parts = split(rest, ',');
    if (parts.size() != 2) throw bad();
    return Kernel::rational_raf(parse_double(parts[0]), parse_double(parts[1]));
  }
  if (head == "genin") {
    std::vector<double> w;
    for (auto p : split(rest, ',')) w.push_back(parse_double(p));
    return Kernel::generalized_ingham(std::move(w));
  }
  if (head == "scaled") {
    // The rescaling is the trailing "id", "pow:<r>" or "exp:<q>".
    for (std::string_view tag : {":exp:", ":pow:"}) {
      auto pos = rest.rfind(tag);
      if (pos != std::string_view::npos && pos > 0)
        return Kernel::scaled(parse_kernel(rest.substr(0, pos)), parse_fspec(rest.substr(pos + 1)));
    }
    for (std::string_view tag : {":id", ":identity"}) {
      if (rest.size() > tag.size() && rest.ends_with(tag))
        return Kernel::scaled(parse_kernel(rest.substr(0, rest.size() - tag.size())), FSpec::identity());
    }
    throw bad();
  }
  throw bad();
}

// ---- evaluation ----------------------------------------------------------

namespace {

void check_indices(std::int64_t n, std::int64_t k) {
  if (n < 1 || k < 1 || k > n) throw DomainError("kernel evaluation needs 1 <= k <= n");
}

double generalized_h(const kernels::GeneralizedIngham& g, std::int64_t m) {
  double s = 0.0;
  for (std::int64_t j = 1; j <= m; ++j) s += g.weight(j) * static_cast<double>(m / j);
  return s;
}

double disc_eval(double lambda, std::int64_t n, std::int64_t k) {
  const double x = static_cast<double>(k) / static_cast<double>(n);
  if (lambda == std::round(lambda) && lambda < 9.2e18) {
    int j = floor_log_ratio(n, k, static_cast<std::int64_t>(lambda));
    return x * std::pow(lambda, j);
  }
  return x * std::pow(lambda, disc_exponent(static_cast<double>(n) / static_cast<double>(k), lambda));
}

double scaled_eval(const kernels::Scaled& s, std::int64_t n, std::int64_t k) {
  const Kernel& base = *s.base;
  if (s.f.kind() == FSpec::Kind::identity) return eval(base, n, k);
  if (base.kind() == KernelKind::ingham) return s.f.ingham_at(n, k);
  const double lx = s.f.log_value(k) - s.f.log_value(n);
  if (auto lg = std::get_if<kernels::Log>(&base.variant())) return 1.0 - lg->lambda * lx;
  const double x = k == n ? 1.0 : std::exp(lx);
  return base.profile(x);
}

}  // namespace

double eval(const Kernel& kernel, std::int64_t n, std::int64_t k) {
  check_indices(n, k);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  double value = std::visit(
      [&](const auto& g) -> double {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, kernels::Ingham>) {
          return kd * static_cast<double>(n / k) / nd;
        } else if constexpr (std::is_same_v<T, kernels::Affine>) {
          return (1.0 - g.lambda) * (kd / nd) + g.lambda;
        } else if constexpr (std::is_same_v<T, kernels::Log>) {
          return 1.0 - g.lambda * std::log(kd / nd);
        } else if constexpr (std::is_same_v<T, kernels::Disc>) {
          return disc_eval(g.lambda, n, k);
        } else if constexpr (std::is_same_v<T, kernels::RationalRaf>) {
          return (nd + kd + g.x) / (nd + kd + g.y);
        } else if constexpr (std::is_same_v<T, kernels::GeneralizedIngham>) {
          return kd / nd * generalized_h(g, n / k);
        } else {
          return scaled_eval(g, n, k);
        }
      },
      kernel.variant());
  if (k == n && value == 0.0) throw SingularKernelError(n);
  return value;
}

Rational eval_exact(const Kernel& kernel, std::int64_t n, std::int64_t k) {
  if (kernel.kind() != KernelKind::ingham) throw UnsupportedError("exact evaluation is only available for the Ingham kernel");
  check_indices(n, k);
  return Rational(k * (n / k), n);
}

// ---- RowEvaluator --------------------------------------------------------

RowEvaluator::RowEvaluator(const Kernel& kernel, std::int64_t max_n) : kernel_(kernel), max_n_(max_n) {
  if (max_n < 1) throw DomainError("row evaluator needs max_n >= 1");
  const auto size = static_cast<std::size_t>(max_n) + 1;
  switch (kernel.kind()) {
    case KernelKind::log:
      table_.resize(size);
      for (std::int64_t k = 1; k <= max_n; ++k) table_[k] = std::log(static_cast<double>(k));
      break;
    case KernelKind::generalized_ingham: {
      // H(m) = Σ_j u_j ⌊m/j⌋ satisfies H(m) - H(m-1) = Σ_{j|m} u_j.
      const auto& g = std::get<kernels::GeneralizedIngham>(kernel.variant());
      std::vector<double> d(size, 0.0);
      for (std::int64_t j = 1; j <= max_n; ++j) {
        const double u = g.weight(j);
        if (u == 0.0) continue;
        for (std::int64_t m = j; m <= max_n; m += j) d[m] += u;
      }
      table_.assign(size, 0.0);
      for (std::int64_t m = 1; m <= max_n; ++m) table_[m] = table_[m - 1] + d[m];
      break;
    }
    case KernelKind::disc: {
      // Integer λ: λ^j depends on n/k only through ⌊n/k⌋.
      const double lam = std::get<kernels::Disc>(kernel.variant()).lambda;
      if (lam == std::round(lam) && lam < 9.2e18) {
        table_.resize(size);
        const auto base = static_cast<std::int64_t>(lam);
        for (std::int64_t m = 1; m <= max_n; ++m) table_[m] = std::pow(lam, floor_log_ratio(m, 1, base));
      }
      break;
    }
    case KernelKind::scaled: {
      const auto& s = std::get<kernels::Scaled>(kernel.variant());
      if (s.f.kind() != FSpec::Kind::identity && s.base->kind() != KernelKind::ingham) {
        table_.resize(size);
        for (std::int64_t k = 1; k <= max_n; ++k) table_[k] = s.f.log_value(k);
      }
      break;
    }
    default: break;
  }
}

void RowEvaluator::fill(std::int64_t n, std::span<double> out) const {
  if (n < 1 || n > max_n_) throw RangeError("row index outside the evaluator range");
  if (out.size() < static_cast<std::size_t>(n)) throw RangeError("row buffer too small");
  const double nd = static_cast<double>(n);
  switch (kernel_.kind()) {
    case KernelKind::ingham:
      for (std::int64_t k = 1; k <= n; ++k) out[k - 1] = static_cast<double>(k * (n / k)) / nd;
      return;
    case KernelKind::log: {
      const double lam = std::get<kernels::Log>(kernel_.variant()).lambda;
      const double ln = table_[n];
      for (std::int64_t k = 1; k <= n; ++k) out[k - 1] = 1.0 - lam * (table_[k] - ln);
      out[n - 1] = 1.0;
      return;
    }
    case KernelKind::disc:
      if (table_.empty()) break;
      for (std::int64_t k = 1; k <= n; ++k) out[k - 1] = static_cast<double>(k) / nd * table_[n / k];
      return;
    case KernelKind::generalized_ingham:
      for (std::int64_t k = 1; k <= n; ++k) out[k - 1] = static_cast<double>(k) / nd * table_[n / k];
      if (out[n - 1] == 0.0) throw SingularKernelError(n);
      return;
    case KernelKind::scaled: {
      const auto& s = std::get<kernels::Scaled>(kernel_.variant());
      if (!table_.empty()) {
        const Kernel& base = *s.base;
        const double ln = table_[n];
        const auto* lg = std::get_if<kernels::Log>(&base.variant());
        for (std::int64_t k = 1; k < n; ++k) {
          const double lx = table_[k] - ln;
          out[k - 1] = lg ? 1.0 - lg->lambda * lx : base.profile(std::exp(lx));
        }
        out[n - 1] = base.profile(1.0);
        if (out[n - 1] == 0.0) throw SingularKernelError(n);
        return;
      }
      break;
    }
    default: break;
  }
  for (std::int64_t k = 1; k <= n; ++k) out[k - 1] = eval(kernel_, n, k);
}

// ---- integer helpers -----------------------------------------------------

std::int64_t integer_root(std::int64_t n, int p) {
  if (n < 0 || p < 1) throw DomainError("integer_root needs n >= 0 and p >= 1");
  if (p == 1 || n < 2) return n;
  auto r = static_cast<std::int64_t>(std::pow(static_cast<double>(n), 1.0 / p));
  auto pow_le = [&](std::int64_t b) {
    // b^p <= n without overflow
    __int128 acc = 1;
    for (int i = 0; i < p; ++i) {
      acc *= b;
      if (acc > n) return false;
    }
    return true;
  };
  while (r > 0 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

int floor_log_ratio(std::int64_t n, std::int64_t k, std::int64_t base) {
  if (base < 2 || k < 1 || k > n) throw DomainError("floor_log_ratio needs base >= 2 and 1 <= k <= n");
  int j = 0;
  std::int64_t t = n / k;  // k·b^j <= n  <=>  b^j <= ⌊n/k⌋
  std::int64_t p = 1;
  while (p <= t / base) {
    p *= base;
    ++j;
  }
  return j;
}

}  // namespace raf
