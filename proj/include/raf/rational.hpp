#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>

#include <gmpxx.h>

namespace raf {

/// Arbitrary-precision rational number, always held in lowest terms with a
/// positive denominator. Zero is canonically 0/1.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n);  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);
  explicit Rational(const mpq_class& q);
  explicit Rational(const mpz_class& z);

  /// Parses "p" or "p/q".
  static Rational parse(const std::string& text);

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const;

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  bool is_zero() const { return sgn(q_) == 0; }
  bool is_integer() const { return q_.get_den() == 1; }
  int sign() const { return sgn(q_); }

  std::string numerator() const { return q_.get_num().get_str(); }
  std::string denominator() const { return q_.get_den().get_str(); }
  std::string str() const { return q_.get_str(); }
  double to_double() const { return q_.get_d(); }

  /// Integer power; negative exponents invert (zero base then throws).
  static Rational pow(std::int64_t base, std::int64_t exponent);

  const mpq_class& raw() const { return q_; }

 private:
  mpq_class q_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace raf
