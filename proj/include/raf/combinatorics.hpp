#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "raf/sieve.hpp"

namespace raf {

class CountSpec {
 public:
  enum class Kind { coprime_tuples, p_free, prime_powers, smooth, elias_gamma };

  static CountSpec coprime_tuples(int m, std::int64_t n);
  static CountSpec p_free(int p, std::int64_t n);
  static CountSpec prime_powers(int p, std::int64_t n);
  static CountSpec smooth(std::vector<int> primes, std::int64_t n);
  static CountSpec elias_gamma(std::int64_t n);

  Kind kind() const noexcept { return kind_; }
  std::int64_t n() const noexcept { return n_; }
  int m() const noexcept { return param_; }
  int p() const noexcept { return param_; }
  const std::vector<int>& primes() const noexcept { return primes_; }
  /// Product of the smooth primes, or p for prime_powers.
  std::int64_t modulus() const noexcept;

  CountSpec with_n(std::int64_t n) const;
  /// CLI spelling: coprime:2 | pfree:2 | ppow:2 | smooth:2,3 | elias.
  std::string what() const;

 private:
  Kind kind_ = Kind::elias_gamma;
  std::int64_t n_ = 1;
  int param_ = 0;
  std::vector<int> primes_;
};

CountSpec parse_count(std::string_view what, std::int64_t n);

/// Evaluates the floor/Möbius identity for the spec in exact integer arithmetic.
std::int64_t count_formula(const CountSpec& spec, const MobiusTable& table);

/// count_formula for every bound 1..spec.n() at once, from the increments
/// f(n) - f(n-1) = Σ_{k|n} (term(n/k) - term(n/k - 1)); O(n log n). Entry 0 is 0.
std::vector<std::int64_t> count_formula_range(const CountSpec& spec, const MobiusTable& table);

/// Independent count without Möbius values; refuses n > 10⁴ (n > 2000 for m >= 4).
std::int64_t count_oracle(const CountSpec& spec);

/// #{2^a 3^b <= n} by direct enumeration.
std::int64_t l0_count(std::int64_t n);

struct RamanujanReport {
  std::vector<std::int64_t> checkpoints;  // 1000·2^j <= N, then N
  std::vector<double> ratios;             // L0(n) / (ln(2n)ln(3n)/(2 ln2 ln3))
  double max_deviation = 0.0;
  double first_deviation = 0.0;
  double last_deviation = 0.0;
  bool non_worsening = false;  // last <= first + 0.02
};

RamanujanReport ramanujan_l0_compare(std::int64_t N);

}  // namespace raf
