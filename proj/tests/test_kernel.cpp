#include <doctest.h>

#include <cmath>

#include "raf/error.hpp"
#include "raf/kernel.hpp"
#include "raf/rational.hpp"

using namespace raf;

namespace {

double phi_ratio(std::int64_t a, std::int64_t b) {  // Φ(a/b) with an integer floor
  return static_cast<double>(a) / static_cast<double>(b) * static_cast<double>(b / a);
}

}  // namespace

TEST_CASE("Ingham values") {
  const auto g = Kernel::ingham();
  CHECK(eval(g, 2, 1) == 1.0);
  for (std::int64_t n = 1; n <= 50; ++n) CHECK(eval(g, n, n) == 1.0);
  CHECK(eval_exact(g, 3, 2) == Rational(2, 3));
  CHECK(eval_exact(g, 10, 3) == Rational(9, 10));
  for (std::int64_t n = 1; n <= 200; ++n) {
    REQUIRE(eval_exact(g, n, 1) == Rational(1));
    for (std::int64_t k = 1; k <= n; ++k) {
      const double v = eval(g, n, k);
      REQUIRE(v == doctest::Approx(phi_ratio(k, n)).epsilon(1e-15));
      REQUIRE(v <= 1.0);
      REQUIRE(v > 1.0 - static_cast<double>(k) / static_cast<double>(n));
      REQUIRE(eval_exact(g, n, k) == Rational(k * (n / k), n));
    }
  }
  CHECK_THROWS_AS(eval(g, 3, 4), DomainError);
  CHECK_THROWS_AS(eval(g, 3, 0), DomainError);
  CHECK_THROWS_AS(eval_exact(Kernel::affine(0.5), 3, 1), UnsupportedError);
}

TEST_CASE("closed-form kernels") {
  CHECK(eval(Kernel::affine(0.5), 2, 1) == doctest::Approx(0.75));
  for (std::int64_t n = 1; n <= 60; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n);
      REQUIRE(eval(Kernel::affine(0.3), n, k) == doctest::Approx(0.7 * t + 0.3));
      REQUIRE(eval(Kernel::log(0.5), n, k) == doctest::Approx(1.0 - 0.5 * std::log(t)));
      REQUIRE(eval(Kernel::rational_raf(1, 2), n, k) ==
              doctest::Approx((n + k + 1.0) / (n + k + 2.0)));
    }
}

TEST_CASE("disc kernel") {
  const auto d2 = Kernel::disc(2);
  for (std::int64_t n = 1; n <= 300; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      int j = 0;
      while (k << (j + 1) <= n) ++j;
      REQUIRE(eval(d2, n, k) == doctest::Approx(static_cast<double>(k) / n * std::ldexp(1.0, j)));
      REQUIRE(floor_log_ratio(n, k, 2) == j);
    }
  const auto ds = Kernel::disc(std::sqrt(2.0));
  for (std::int64_t n = 2; n <= 100; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      const long double e = -std::log(static_cast<long double>(k) / n) / std::log(std::sqrt(2.0L));
      if (std::abs(e - std::round(e)) < 1e-9) continue;
      const double want = static_cast<double>(k) / n * std::pow(std::sqrt(2.0), std::floor(static_cast<double>(e)));
      REQUIRE(eval(ds, n, k) == doctest::Approx(want));
    }
  CHECK(ds.index_unproven());
  CHECK_FALSE(d2.index_unproven());
}

TEST_CASE("generalized Ingham") {
  const std::vector<double> u{1.0, -0.5, 2.0};
  const auto g = Kernel::generalized_ingham(u);
  for (std::int64_t n = 1; n <= 80; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      double s = 0;
      for (std::int64_t j = 1; j * k <= n; ++j) s += u[(j - 1) % 3] / static_cast<double>(j) * phi_ratio(j * k, n);
      REQUIRE(eval(g, n, k) == doctest::Approx(s).epsilon(1e-13));
    }
}

TEST_CASE("scaled kernels") {
  const auto base = Kernel::affine(0.4);
  const auto s = Kernel::scaled(base, FSpec::power(0.5));
  for (std::int64_t n = 1; n <= 40; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      const double x = std::sqrt(static_cast<double>(k) / n);
      REQUIRE(eval(s, n, k) == doctest::Approx(0.6 * x + 0.4));
    }
  const auto e = Kernel::scaled(Kernel::ingham(), FSpec::exp_plus_one(2));
  for (std::int64_t n = 1; n <= 30; ++n)
    for (std::int64_t k = 1; k <= n; ++k) {
      const double fk = std::ldexp(1.0, static_cast<int>(k)) + 1, fn = std::ldexp(1.0, static_cast<int>(n)) + 1;
      REQUIRE(eval(e, n, k) == doctest::Approx(fk / fn * std::floor(fn / fk)));
    }
  CHECK(eval(e, 200, 150) == doctest::Approx(1.0 - std::ldexp(1.0, -50)).epsilon(1e-15));
  CHECK(eval(e, 200, 3) == doctest::Approx(1.0));
  const auto id = Kernel::scaled(Kernel::ingham(), FSpec::identity());
  CHECK(eval(id, 10, 3) == doctest::Approx(0.9));
  CHECK_THROWS_AS(Kernel::scaled(Kernel::rational_raf(1, 2), FSpec::identity()), UnsupportedError);
  CHECK_FALSE(s.is_fgv());
  CHECK(base.is_fgv());
}

TEST_CASE("row evaluator matches pointwise evaluation") {
  const std::vector<Kernel> ks{Kernel::ingham(),
                               Kernel::affine(0.5),
                               Kernel::log(0.5),
                               Kernel::disc(2),
                               Kernel::disc(3),
                               Kernel::disc(1.7),
                               Kernel::rational_raf(3, 1),
                               Kernel::generalized_ingham({1, 2}),
                               Kernel::scaled(Kernel::log(0.3), FSpec::power(0.5)),
                               Kernel::scaled(Kernel::ingham(), FSpec::exp_plus_one(3))};
  for (const auto& kernel : ks) {
    CAPTURE(kernel.spec());
    const std::int64_t max_n = kernel.kind() == KernelKind::scaled ? 30 : 250;
    RowEvaluator row(kernel, max_n);
    std::vector<double> buf(static_cast<std::size_t>(max_n));
    for (std::int64_t n = 1; n <= max_n; ++n) {
      row.fill(n, buf);
      for (std::int64_t k = 1; k <= n; ++k) REQUIRE(buf[k - 1] == doctest::Approx(eval(kernel, n, k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("spec round trip") {
  for (const char* text : {"ingham", "affine:0.5", "log:0.25", "disc:2", "ratraf:1,2", "genin:1,-1",
                           "scaled:ingham:exp:2", "scaled:affine:0.5:pow:0.5", "scaled:ingham:id"}) {
    const auto k = parse_kernel(text);
    CHECK(parse_kernel(k.spec()).spec() == k.spec());
  }
  CHECK(parse_kernel("affine:0.5").kind() == KernelKind::affine);
  CHECK_THROWS_AS(parse_kernel("nope"), FormatError);
  CHECK_THROWS_AS(parse_kernel("affine:x"), FormatError);
  CHECK_THROWS_AS(parse_kernel("affine:1.5"), DomainError);
  CHECK_THROWS_AS(parse_kernel("disc:1"), DomainError);
  CHECK_THROWS_AS(parse_fspec("exp:1"), DomainError);
}

TEST_CASE("integer helpers") {
  for (std::int64_t n = 0; n <= 5000; ++n)
    for (int p = 1; p <= 4; ++p) {
      const std::int64_t r = integer_root(n, p);
      REQUIRE(static_cast<double>(r) <= std::pow(static_cast<double>(n), 1.0 / p) + 1e-9);
      std::int64_t up = 1;
      for (int i = 0; i < p; ++i) up *= r + 1;
      REQUIRE(up > n);
    }
  CHECK(integer_root(std::int64_t{1} << 62, 2) == std::int64_t{1} << 31);
  CHECK(integer_root(999999999999999999, 3) == 999999);
}

TEST_CASE("singular diagonal") {
  CHECK_THROWS_AS(eval(Kernel::generalized_ingham({0.0}), 4, 4), SingularKernelError);
}
