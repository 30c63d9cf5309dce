#include <doctest.h>

#include <numeric>

#include "raf/combinatorics.hpp"
#include "raf/error.hpp"

using namespace raf;

namespace {

std::int64_t coprime_brute(int m, std::int64_t n) {
  std::vector<std::int64_t> t(static_cast<std::size_t>(m), 1);
  std::int64_t count = 0;
  for (;;) {
    std::int64_t g = 0;
    for (auto v : t) g = std::gcd(g, v);
    count += g == 1;
    int i = 0;
    while (i < m && t[i] == n) t[i++] = 1;
    if (i == m) return count;
    ++t[i];
  }
}

bool p_free_brute(std::int64_t k, int p) {
  for (std::int64_t d = 2;; ++d) {
    std::int64_t dp = 1;
    for (int i = 0; i < p; ++i) dp *= d;
    if (dp > k) return true;
    if (k % dp == 0) return false;
  }
}

bool smooth_brute(std::int64_t k, const std::vector<int>& primes) {
  for (int p : primes)
    while (k % p == 0) k /= p;
  return k == 1;
}

}  // namespace

TEST_CASE("hand-checked counts") {
  const auto t = sieve(1000);
  CHECK(count_formula(CountSpec::coprime_tuples(1, 37), t) == 1);
  CHECK(count_formula(CountSpec::coprime_tuples(2, 10), t) == 63);
  CHECK(count_oracle(CountSpec::coprime_tuples(2, 10)) == 63);
  CHECK(count_oracle(CountSpec::coprime_tuples(2, 4)) == 11);
  CHECK(count_formula(CountSpec::p_free(2, 10), t) == 7);
  CHECK(count_oracle(CountSpec::p_free(3, 10)) == 9);
  CHECK(count_formula(CountSpec::prime_powers(2, 10), t) == 4);
  CHECK(count_formula(CountSpec::smooth({2, 3}, 10), t) == 7);
  CHECK(count_oracle(CountSpec::smooth({2}, 10)) == 4);
  CHECK(count_formula(CountSpec::elias_gamma(10), t) == 7);
}

TEST_CASE("formulas against test-side enumeration") {
  const auto t = sieve(100000);
  for (std::int64_t n = 1; n <= 40; ++n) {
    REQUIRE(count_formula(CountSpec::coprime_tuples(2, n), t) == coprime_brute(2, n));
    REQUIRE(count_formula(CountSpec::coprime_tuples(3, n), t) == coprime_brute(3, n));
    if (n <= 15) REQUIRE(count_formula(CountSpec::coprime_tuples(4, n), t) == coprime_brute(4, n));
  }
  std::int64_t sf2 = 0, sf3 = 0, s23 = 0, s5 = 0, p3 = 0;
  for (std::int64_t n = 1; n <= 3000; ++n) {
    sf2 += p_free_brute(n, 2);
    sf3 += p_free_brute(n, 3);
    s23 += smooth_brute(n, {2, 3});
    s5 += smooth_brute(n, {2, 3, 5});
    std::int64_t q = n;
    while (q % 3 == 0) q /= 3;
    p3 += q == 1;
    REQUIRE(count_formula(CountSpec::p_free(2, n), t) == sf2);
    REQUIRE(count_formula(CountSpec::p_free(3, n), t) == sf3);
    REQUIRE(count_formula(CountSpec::smooth({2, 3}, n), t) == s23);
    REQUIRE(count_formula(CountSpec::smooth({5, 2, 3}, n), t) == s5);
    REQUIRE(count_formula(CountSpec::prime_powers(3, n), t) == p3);
    REQUIRE(count_formula(CountSpec::elias_gamma(n), t) == 1 + 2 * (std::bit_width(static_cast<std::uint64_t>(n)) - 1));
  }
}

TEST_CASE("oracle agrees with formula") {
  const auto t = sieve(15000);
  for (std::int64_t n : {1, 2, 3, 97, 500}) {
    for (const auto& spec : {CountSpec::coprime_tuples(2, n), CountSpec::coprime_tuples(3, n), CountSpec::coprime_tuples(4, n),
                             CountSpec::p_free(2, n), CountSpec::p_free(3, n), CountSpec::prime_powers(5, n),
                             CountSpec::smooth({3, 5}, n), CountSpec::elias_gamma(n)}) {
      CAPTURE(spec.what());
      REQUIRE(count_formula(spec, t) == count_oracle(spec));
    }
  }
}

TEST_CASE("range evaluation matches pointwise evaluation") {
  const auto t = sieve(30000);
  for (const auto& spec : {CountSpec::coprime_tuples(3, 1000), CountSpec::p_free(2, 1000), CountSpec::smooth({2, 3, 5}, 1000),
                           CountSpec::prime_powers(2, 1000), CountSpec::elias_gamma(1000)}) {
    const auto all = count_formula_range(spec, t);
    for (std::int64_t n = 1; n <= 1000; ++n) REQUIRE(all[n] == count_formula(spec.with_n(n), t));
  }
}

TEST_CASE("spec parsing and limits") {
  CHECK(parse_count("coprime:3", 5).m() == 3);
  CHECK(parse_count("smooth:2,3", 5).modulus() == 6);
  CHECK(parse_count("elias", 5).what() == "elias");
  CHECK(parse_count("ppow:2", 5).kind() == CountSpec::Kind::prime_powers);
  CHECK_THROWS_AS(parse_count("nope", 5), FormatError);
  CHECK_THROWS_AS(CountSpec::prime_powers(4, 10), DomainError);
  CHECK_THROWS_AS(CountSpec::smooth({2, 2}, 10), DomainError);
  CHECK_THROWS_AS(count_oracle(CountSpec::coprime_tuples(4, 2001)), CostLimitError);
  CHECK_THROWS_AS(count_oracle(CountSpec::p_free(2, 10001)), CostLimitError);
  const auto t = sieve(100);
  CHECK_THROWS_AS(count_formula(CountSpec::p_free(2, 101), t), RangeError);
  CHECK_THROWS_AS(count_formula(CountSpec::smooth({2, 3}, 50), t), RangeError);
  CHECK_THROWS_AS(count_formula(CountSpec::coprime_tuples(40, 100), t), RangeError);
}

TEST_CASE("three-smooth counts and Ramanujan's estimate") {
  CHECK(l0_count(10) == 7);
  CHECK(l0_count(1) == 1);
  const auto r = ramanujan_l0_compare(1000000);
  CHECK(r.checkpoints.front() == 1000);
  CHECK(r.checkpoints.back() == 1000000);
  CHECK(std::abs(r.ratios.back() - 1.0) < 0.1);
  CHECK(r.non_worsening);
  CHECK(r.last_deviation <= r.first_deviation + 0.02);
  CHECK_THROWS_AS(ramanujan_l0_compare(999), DomainError);
}
