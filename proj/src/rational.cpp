#include "raf/rational.hpp"

#include <ostream>

#include "raf/error.hpp"

namespace raf {
namespace {

mpz_class to_mpz(std::int64_t v) {
  // mpz_class has no int64_t constructor on every platform; go via string
  // only when long is narrower than 64 bits.
  if constexpr (sizeof(long) >= sizeof(std::int64_t)) {
    return mpz_class(static_cast<long>(v));
  } else {
    return mpz_class(std::to_string(v));
  }
}

}  // namespace

Rational::Rational(std::int64_t n) : q_(to_mpz(n)) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw DomainError("rational with zero denominator");
  q_ = mpq_class(to_mpz(num), to_mpz(den));
  q_.canonicalize();
}

Rational::Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

Rational::Rational(const mpz_class& z) : q_(z) {}

Rational Rational::parse(const std::string& text) {
  mpq_class q;
  if (q.set_str(text, 10) != 0) throw FormatError("not a rational: '" + text + "'");
  if (q.get_den() == 0) throw DomainError("rational with zero denominator");
  return Rational(q);
}

Rational& Rational::operator+=(const Rational& rhs) {
  q_ += rhs.q_;
  return *this;
}
Rational& Rational::operator-=(const Rational& rhs) {
  q_ -= rhs.q_;
  return *this;
}
Rational& Rational::operator*=(const Rational& rhs) {
  q_ *= rhs.q_;
  return *this;
}
Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) throw DomainError("rational division by zero");
  q_ /= rhs.q_;
  return *this;
}

Rational Rational::operator-() const { return Rational(mpq_class(-q_)); }

bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  const int c = cmp(a.q_, b.q_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Rational::pow(std::int64_t base, std::int64_t exponent) {
  if (exponent == 0) return Rational(1);
  if (base == 0) {
    if (exponent < 0) throw DomainError("0 raised to a negative power");
    return Rational(0);
  }
  const unsigned long e = static_cast<unsigned long>(exponent < 0 ? -exponent : exponent);
  mpz_class p;
  mpz_pow_ui(p.get_mpz_t(), to_mpz(base).get_mpz_t(), e);
  if (exponent > 0) return Rational(p);
  return Rational(mpq_class(mpz_class(1), p));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace raf
