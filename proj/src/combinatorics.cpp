#include "raf/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>

#include "raf/error.hpp"
#include "raf/kernel.hpp"

namespace raf {

namespace {

bool is_prime_small(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

void check_n(std::int64_t n) {
  if (n < 1) throw DomainError("count bound n must be >= 1");
}

std::int64_t to_int64(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw RangeError("count exceeds the 64-bit range");
  return static_cast<std::int64_t>(v);
}

// q^m, throwing if it leaves the 128-bit range.
__int128 checked_pow(std::int64_t q, int m) {
  __int128 r = 1;
  const __int128 cap = static_cast<__int128>(1) << 120;
  for (int i = 0; i < m; ++i) {
    r *= q;
    if (r > cap) throw RangeError("count term q^m overflows");
  }
  return r;
}

}  // namespace

CountSpec CountSpec::coprime_tuples(int m, std::int64_t n) {
  if (m < 1) throw DomainError("coprime tuples need m >= 1");
  check_n(n);
  CountSpec s;
  s.kind_ = Kind::coprime_tuples;
  s.param_ = m;
  s.n_ = n;
  return s;
}

CountSpec CountSpec::p_free(int p, std::int64_t n) {
  if (p < 2) throw DomainError("p-free counting needs p >= 2");
  check_n(n);
  CountSpec s;
  s.kind_ = Kind::p_free;
  s.param_ = p;
  s.n_ = n;
  return s;
}

CountSpec CountSpec::prime_powers(int p, std::int64_t n) {
  if (!is_prime_small(p)) throw DomainError("prime powers need a prime p");
  check_n(n);
  CountSpec s;
  s.kind_ = Kind::prime_powers;
  s.param_ = p;
  s.n_ = n;
  return s;
}

CountSpec CountSpec::smooth(std::vector<int> primes, std::int64_t n) {
  if (primes.empty()) throw DomainError("smooth counting needs at least one prime");
  std::sort(primes.begin(), primes.end());
  if (std::adjacent_find(primes.begin(), primes.end()) != primes.end())
    throw DomainError("smooth primes must be pairwise distinct");
  for (int p : primes)
    if (!is_prime_small(p)) throw DomainError("smooth counting needs primes, got " + std::to_string(p));
  check_n(n);
  CountSpec s;
  s.kind_ = Kind::smooth;
  s.param_ = static_cast<int>(primes.size());
  s.primes_ = std::move(primes);
  s.n_ = n;
  return s;
}

CountSpec CountSpec::elias_gamma(std::int64_t n) {
  check_n(n);
  CountSpec s;
  s.kind_ = Kind::elias_gamma;
  s.n_ = n;
  return s;
}

std::int64_t CountSpec::modulus() const noexcept {
  if (kind_ == Kind::prime_powers) return param_;
  std::int64_t P = 1;
  for (int p : primes_) P *= p;
  return P;
}

CountSpec CountSpec::with_n(std::int64_t n) const {
  check_n(n);
  CountSpec s = *this;
  s.n_ = n;
  return s;
}

std::string CountSpec::what() const {
  switch (kind_) {
    case Kind::coprime_tuples: return "coprime:" + std::to_string(param_);
    case Kind::p_free: return "pfree:" + std::to_string(param_);
    case Kind::prime_powers: return "ppow:" + std::to_string(param_);
    case Kind::smooth: {
      std::string s = "smooth:";
      for (std::size_t i = 0; i < primes_.size(); ++i) s += (i ? "," : "") + std::to_string(primes_[i]);
      return s;
    }
    case Kind::elias_gamma: return "elias";
  }
  return "";
}

CountSpec parse_count(std::string_view what, std::int64_t n) {
  auto bad = [&]() {
    return FormatError("unknown count spec '" + std::string(what) +
                       "'; expected coprime:<m> | pfree:<p> | ppow:<p> | smooth:<p1>,<p2>,... | elias");
  };
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) throw bad();
    return v;
  };
  if (what == "elias") return CountSpec::elias_gamma(n);
  auto colon = what.find(':');
  if (colon == std::string_view::npos) throw bad();
  auto head = what.substr(0, colon);
  auto arg = what.substr(colon + 1);
  if (head == "coprime") return CountSpec::coprime_tuples(to_int(arg), n);
  if (head == "pfree") return CountSpec::p_free(to_int(arg), n);
  if (head == "ppow") return CountSpec::prime_powers(to_int(arg), n);
  if (head == "smooth") {
    std::vector<int> ps;
    std::size_t start = 0;
    for (;;) {
      auto pos = arg.find(',', start);
      ps.push_back(to_int(arg.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    return CountSpec::smooth(std::move(ps), n);
  }
  throw bad();
}

std::int64_t count_formula(const CountSpec& spec, const MobiusTable& table) {
  const std::int64_t n = spec.n();
  if (n > table.limit()) throw RangeError("count bound exceeds the Möbius table");
  __int128 sum = 0;
  switch (spec.kind()) {
    case CountSpec::Kind::coprime_tuples:
      // Σ_k μ(k)⌊n/k⌋^m, grouping k by ⌊n/k⌋ via Mertens differences.
      for (std::int64_t k = 1; k <= n;) {
        const std::int64_t q = n / k;
        const std::int64_t k2 = n / q;
        const std::int64_t dm = table.mertens(k2) - table.mertens(k - 1);
        if (dm != 0) sum += static_cast<__int128>(dm) * checked_pow(q, spec.m());
        k = k2 + 1;
      }
      break;
    case CountSpec::Kind::p_free: {
      const std::int64_t kmax = integer_root(n, spec.p());
      for (std::int64_t k = 1; k <= kmax; ++k) {
        const int mu = table.mu(k);
        if (mu) sum += mu * (n / static_cast<std::int64_t>(checked_pow(k, spec.p())));
      }
      break;
    }
    case CountSpec::Kind::prime_powers:
    case CountSpec::Kind::smooth: {
      const std::int64_t P = spec.modulus();
      if (n > table.limit() / P)
        throw RangeError("formula needs μ up to " + std::to_string(P) + "·n, beyond the Möbius table");
      for (std::int64_t k = 1; k <= n; ++k) {
        const int mu = table.mu(P * k);
        if (mu) sum += mu * (n / k);
      }
      const int m = spec.kind() == CountSpec::Kind::prime_powers ? 1 : spec.m();
      if (m % 2 == 1) sum = -sum;
      break;
    }
    case CountSpec::Kind::elias_gamma:
      for (std::int64_t k = 1; k <= n; ++k) {
        const int mu = table.mu(k);
        if (mu) sum += (k % 2 == 1 ? mu : -mu) * (n / k);
      }
      break;
  }
  return to_int64(sum);
}

std::vector<std::int64_t> count_formula_range(const CountSpec& spec, const MobiusTable& table) {
  const std::int64_t N = spec.n();
  if (N > table.limit()) throw RangeError("count bound exceeds the Möbius table");
  std::vector<__int128> inc(static_cast<std::size_t>(N) + 1, 0);
  switch (spec.kind()) {
    case CountSpec::Kind::coprime_tuples:
      for (std::int64_t k = 1; k <= N; ++k) {
        const int mu = table.mu(k);
        if (!mu) continue;
        for (std::int64_t n = k, q = 1; n <= N; n += k, ++q)
          inc[n] += mu * (checked_pow(q, spec.m()) - checked_pow(q - 1, spec.m()));
      }
      break;
    case CountSpec::Kind::p_free: {
      const std::int64_t kmax = integer_root(N, spec.p());
      for (std::int64_t k = 1; k <= kmax; ++k) {
        const int mu = table.mu(k);
        if (!mu) continue;
        const auto kp = static_cast<std::int64_t>(checked_pow(k, spec.p()));
        for (std::int64_t n = kp; n <= N; n += kp) inc[n] += mu;
      }
      break;
    }
    case CountSpec::Kind::prime_powers:
    case CountSpec::Kind::smooth: {
      const std::int64_t P = spec.modulus();
      if (N > table.limit() / P)
        throw RangeError("formula needs μ up to " + std::to_string(P) + "·n, beyond the Möbius table");
      const int m = spec.kind() == CountSpec::Kind::prime_powers ? 1 : spec.m();
      const int sign = m % 2 == 1 ? -1 : 1;
      for (std::int64_t k = 1; k <= N; ++k) {
        const int mu = table.mu(P * k);
        if (!mu) continue;
        for (std::int64_t n = k; n <= N; n += k) inc[n] += sign * mu;
      }
      break;
    }
    case CountSpec::Kind::elias_gamma:
      for (std::int64_t k = 1; k <= N; ++k) {
        const int mu = table.mu(k);
        if (!mu) continue;
        const int c = k % 2 == 1 ? mu : -mu;
        for (std::int64_t n = k; n <= N; n += k) inc[n] += c;
      }
      break;
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(N) + 1, 0);
  __int128 acc = 0;
  for (std::int64_t n = 1; n <= N; ++n) {
    acc += inc[n];
    out[n] = to_int64(acc);
  }
  return out;
}

namespace {

std::int64_t coprime_oracle(int m, std::int64_t n) {
  // Literal enumeration of all m-tuples when small enough.
  double space = std::pow(static_cast<double>(n), m);
  if (space <= 2e6) {
    std::vector<std::int64_t> t(static_cast<std::size_t>(m), 1);
    std::int64_t count = 0;
    for (;;) {
      std::int64_t g = 0;
      for (auto v : t) g = std::gcd(g, v);
      if (g == 1) ++count;
      int i = 0;
      while (i < m && t[i] == n) t[i++] = 1;
      if (i == m) break;
      ++t[i];
    }
    return count;
  }
  // c(g) = #tuples with gcd exactly g = ⌊n/g⌋^m - Σ_{j≥2} c(jg).
  std::vector<__int128> c(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t g = n; g >= 1; --g) {
    __int128 v = checked_pow(n / g, m);
    for (std::int64_t h = 2 * g; h <= n; h += g) v -= c[h];
    c[g] = v;
  }
  const std::int64_t result = to_int64(c[1]);
  if (m == 2) {
    const auto phi = totient_table(n);
    std::int64_t s = 0;
    for (std::int64_t k = 1; k <= n; ++k) s += phi[k];
    if (2 * s - 1 != result) throw Error("coprime-pair oracles disagree");
  }
  return result;
}

}  // namespace

std::int64_t count_oracle(const CountSpec& spec) {
  const std::int64_t n = spec.n();
  const bool heavy = spec.kind() == CountSpec::Kind::coprime_tuples && spec.m() >= 4;
  const std::int64_t cap = heavy ? 2000 : 10000;
  if (n > cap) throw CostLimitError("oracle refuses n = " + std::to_string(n) + " (limit " + std::to_string(cap) + ")");
  switch (spec.kind()) {
    case CountSpec::Kind::coprime_tuples: return coprime_oracle(spec.m(), n);
    case CountSpec::Kind::p_free: {
      std::int64_t count = 0;
      for (std::int64_t i = 1; i <= n; ++i) {
        bool free = true;
        for (std::int64_t j = 2; free; ++j) {
          const __int128 jp = checked_pow(j, spec.p());
          if (jp > i) break;
          if (i % static_cast<std::int64_t>(jp) == 0) free = false;
        }
        count += free;
      }
      return count;
    }
    case CountSpec::Kind::prime_powers: {
      std::int64_t count = 0;
      for (__int128 v = 1; v <= n; v *= spec.p()) ++count;
      return count;
    }
    case CountSpec::Kind::smooth: {
      std::int64_t count = 0;
      for (std::int64_t i = 1; i <= n; ++i) {
        std::int64_t r = i;
        for (int p : spec.primes())
          while (r % p == 0) r /= p;
        count += r == 1;
      }
      return count;
    }
    case CountSpec::Kind::elias_gamma:
      return 1 + 2 * (static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(n))) - 1);
  }
  return 0;
}

std::int64_t l0_count(std::int64_t n) {
  if (n < 1) return 0;
  std::int64_t count = 0;
  for (__int128 a = 1; a <= n; a *= 2)
    for (__int128 b = a; b <= n; b *= 3) ++count;
  return count;
}

RamanujanReport ramanujan_l0_compare(std::int64_t N) {
  if (N < 1000) throw DomainError("ramanujan_l0_compare needs N >= 1000");
  RamanujanReport rep;
  for (std::int64_t x = 1000; x <= N; x = x > N / 2 ? N + 1 : 2 * x) rep.checkpoints.push_back(x);
  if (rep.checkpoints.back() != N) rep.checkpoints.push_back(N);
  const double denom = 2.0 * std::log(2.0) * std::log(3.0);
  for (auto x : rep.checkpoints) {
    const double xd = static_cast<double>(x);
    const double asym = std::log(2.0 * xd) * std::log(3.0 * xd) / denom;
    const double r = static_cast<double>(l0_count(x)) / asym;
    rep.ratios.push_back(r);
    rep.max_deviation = std::max(rep.max_deviation, std::abs(r - 1.0));
  }
  rep.first_deviation = std::abs(rep.ratios.front() - 1.0);
  rep.last_deviation = std::abs(rep.ratios.back() - 1.0);
  rep.non_worsening = rep.last_deviation <= rep.first_deviation + 0.02;
  return rep;
}

}  // namespace raf
