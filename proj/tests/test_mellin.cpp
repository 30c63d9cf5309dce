#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "raf/error.hpp"
#include "raf/mellin.hpp"

using namespace raf;
using std::numbers::pi;

namespace {

// ζ(s) = η(s)/(1 - 2^{1-s}); η by repeated averaging of the alternating partial sums.
Complex zeta_eta(Complex s) {
  constexpr int terms = 4000, levels = 30;
  std::vector<Complex> partial;
  Complex acc = 0;
  for (int n = 1; n <= terms + levels; ++n) {
    acc += (n % 2 ? 1.0 : -1.0) * std::exp(-s * std::log(static_cast<double>(n)));
    if (n >= terms) partial.push_back(acc);
  }
  for (int l = 0; l < levels; ++l)
    for (std::size_t i = 0; i + 1 < partial.size() - l; ++i) partial[i] = 0.5 * (partial[i] + partial[i + 1]);
  return partial[0] / (1.0 - std::exp((1.0 - s) * std::log(2.0)));
}

// -z ∫_0^1 g(t) t^{-z-1} dt for the disc profile, summed over the intervals where g(t) = t·λ^j.
Complex disc_integral(double lambda, Complex z) {
  Complex s = 0;
  const double ll = std::log(lambda);
  for (int j = 0; j < 400; ++j) {
    const Complex hi = std::exp(-static_cast<double>(j) * ll * (1.0 - z));
    const Complex lo = std::exp(-static_cast<double>(j + 1) * ll * (1.0 - z));
    s += std::pow(lambda, j) * (hi - lo) / (1.0 - z);
  }
  return -z * s;
}

}  // namespace

TEST_CASE("zeta at classical points") {
  CHECK(std::abs(zeta(2.0) - pi * pi / 6) < 1e-13);
  CHECK(std::abs(zeta(4.0) - std::pow(pi, 4) / 90) < 1e-13);
  CHECK(std::abs(zeta(3.0) - 1.2020569031595942) < 1e-13);
  CHECK(std::abs(zeta(0.0) + 0.5) < 1e-13);
  CHECK(std::abs(zeta(-1.0) + 1.0 / 12) < 1e-13);
  CHECK(std::abs(zeta(-3.0) - 1.0 / 120) < 1e-13);
  CHECK(std::abs(zeta(-2.0)) < 1e-13);
  CHECK(std::abs(zeta(Complex(0.5, 14.134725141734693))) < 1e-9);
  CHECK(std::abs(zeta(Complex(0.5, 14.134725))) < 1e-5);
  CHECK(std::abs(zeta(Complex(0.5, 21.022039638771555))) < 1e-9);
}

TEST_CASE("zeta against the alternating series") {
  for (Complex s : {Complex(0.5, 0), Complex(0.75, 0), Complex(0.3, 5), Complex(2, -7), Complex(0.9, 30), Complex(1.5, 0.1)}) {
    CAPTURE(s);
    const Complex want = zeta_eta(s);
    CHECK(std::abs(zeta(s) - want) < 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("zeta symmetry and region") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-9.5, 10.0), im(-100.0, 100.0);
  for (int i = 0; i < 100; ++i) {
    const Complex s(re(rng), im(rng));
    const Complex a = zeta(s), b = zeta(std::conj(s));
    REQUIRE(std::abs(a - std::conj(b)) <= 1e-12 * std::max(1.0, std::abs(a)));
  }
  CHECK_THROWS_AS(zeta(1.0), PoleError);
  CHECK_THROWS_AS(zeta(Complex(-11, 0)), UnsupportedError);
  CHECK_THROWS_AS(zeta(Complex(2, 150)), UnsupportedError);
}

TEST_CASE("log gamma") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 7.0, 30.0}) CHECK(log_gamma(x).real() == doctest::Approx(std::lgamma(x)).epsilon(1e-13));
  for (double t : {0.5, 3.0, 20.0}) {
    const double want = 0.5 * std::log(pi / std::cosh(pi * t));
    CHECK(log_gamma(Complex(0.5, t)).real() == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("closed transforms") {
  const auto ing = Kernel::ingham();
  CHECK(closed_transform(ing, 0.0).value == Complex(1.0, 0.0));
  CHECK(std::abs(closed_transform(ing, -1.0).value - pi * pi / 12) < 1e-12);
  CHECK(std::abs(closed_transform(ing, -2.0).value - 2.0 / 3 * 1.2020569031595942) < 1e-12);
  CHECK(std::abs(closed_transform(ing, Complex(1e-10, 0)).value - 1.0) < 1e-8);
  CHECK_THROWS_AS(closed_transform(ing, 1.0), PoleError);

  for (double l : {0.3, 0.5, 0.7}) CHECK(std::abs(closed_transform(Kernel::affine(l), l).value) < 1e-14);
  for (Complex z : {Complex(-1.5, 0), Complex(-0.5, 2), Complex(0.3, -1)}) {
    CAPTURE(z);
    // -z ∫ ((1-λ)t + λ) t^{-z-1} dt and -z ∫ (1 - λ ln t) t^{-z-1} dt, integrated by hand.
    CHECK(std::abs(closed_transform(Kernel::affine(0.4), z).value - (0.6 * -z / (1.0 - z) + 0.4)) < 1e-13);
    CHECK(std::abs(closed_transform(Kernel::log(0.4), z).value - (1.0 - 0.4 / z)) < 1e-13);
    if (z.real() < 0)
      for (double l : {2.0, 3.0, 1.5})
        CHECK(std::abs(closed_transform(Kernel::disc(l), z).value - disc_integral(l, z)) < 1e-12);
  }
  CHECK(closed_transform(Kernel::log(0.5), -1.0).value.real() == doctest::Approx(1.5));
  CHECK(closed_transform(Kernel::rational_raf(1, 2), Complex(-3, 4)).value == Complex(1, 0));
  CHECK_THROWS_AS(closed_transform(Kernel::generalized_ingham({1, 2}), -1.0), UnsupportedError);
  CHECK_THROWS_AS(closed_transform(Kernel::log(0.5), 0.0), PoleError);

  const auto e2 = Kernel::scaled(ing, FSpec::exp_plus_one(2));
  CHECK(std::abs(closed_transform(e2, -1.0).value - 5.0 / 6) < 1e-14);
  CHECK_THROWS_AS(closed_transform(e2, 1.0), PoleError);
  CHECK(std::abs(closed_transform(Kernel::scaled(ing, FSpec::power(0.5)), -1.0).value - pi * pi / 12) < 1e-12);
}

TEST_CASE("limit transforms") {
  const auto ing = Kernel::ingham();
  const auto r = limit_transform(ing, -1.0, 100000);
  CHECK(std::abs(r.value - pi * pi / 12) / (pi * pi / 12) < 0.01);
  REQUIRE(r.convergence);
  CHECK(r.convergence->n == 100000);
  CHECK(std::abs(r.convergence->at_2n - pi * pi / 12) < std::abs(r.value - pi * pi / 12));
  const auto r2 = limit_transform(ing, -2.0, 100000);
  CHECK(std::abs(r2.value - 2.0 / 3 * 1.2020569031595942) < 0.01 * 0.8);
  CHECK(std::abs(limit_transform(Kernel::affine(0.5), -1.0, 100000).value - 0.75) < 1e-4);
  CHECK_THROWS_AS(limit_transform(ing, 0.0, 100), DomainError);
  CHECK_THROWS_AS(limit_transform(ing, Complex(0.5, 1), 100), DomainError);
  CHECK_THROWS_AS(limit_transform(ing, -1.0, 9), DomainError);
}

TEST_CASE("transforms with respect to f") {
  const auto ing = Kernel::ingham();
  CHECK(std::abs(limit_transform_wrt_f(ing, FSpec::exp_plus_one(2), -1.0, 60).value - 5.0 / 6) < 1e-6);
  CHECK(std::abs(limit_transform_wrt_f(ing, FSpec::exp_plus_one(3), Complex(-0.5, 1), 60).value -
                 closed_transform(Kernel::scaled(ing, FSpec::exp_plus_one(3)), Complex(-0.5, 1)).value) < 1e-6);
  const auto p1 = limit_transform_wrt_f(ing, FSpec::power(1), -1.0, 20000);
  CHECK(std::abs(p1.value - limit_transform(ing, -1.0, 20000).value) < 1e-12);
  CHECK(std::abs(limit_transform_wrt_f(ing, FSpec::power(0.5), -1.0, 100000).value - pi * pi / 12) < 0.02 * pi * pi / 12);
  CHECK_THROWS_AS(limit_transform_wrt_f(Kernel::rational_raf(1, 2), FSpec::power(1), -1.0, 100), UnsupportedError);
}

TEST_CASE("zeros of the exp-scaled transform") {
  const auto z = phi_f_zeros(2, 0, 2);
  REQUIRE(z.size() == 1);
  CHECK(std::abs(z[0] - Complex(0.5, pi / (4 * std::log(2.0)))) < 1e-12);
  const auto w = phi_f_zeros(2, -2, 0);
  REQUIRE(w.size() == 1);
  CHECK(std::abs(w[0] - std::conj(z[0])) < 1e-12);
  for (int q = 2; q <= 10; ++q) {
    const auto zs = phi_f_zeros(q, -40, 40);
    // Two zeros per period 2π/ln q.
    CHECK(std::abs(static_cast<double>(zs.size()) - 80 * std::log(q) / pi) <= 2);
    const auto k = Kernel::scaled(Kernel::ingham(), FSpec::exp_plus_one(q));
    for (Complex s : zs) {
      REQUIRE(std::abs(s.real() - 0.5) < 1e-9);
      REQUIRE(std::abs(closed_transform(k, s).value) < 1e-9);
    }
  }
  CHECK_THROWS_AS(phi_f_zeros(1, 0, 1), DomainError);
  CHECK_THROWS_AS(phi_f_zeros(2, 1, 0), DomainError);
}
