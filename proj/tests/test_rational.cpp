#include <doctest.h>

#include <sstream>

#include "raf/error.hpp"
#include "raf/rational.hpp"

using raf::Rational;

TEST_CASE("normalised arithmetic") {
  const Rational a(6, -4);
  CHECK(a.numerator() == "-3");
  CHECK(a.denominator() == "2");
  CHECK(a + Rational(1, 2) == Rational(-1));
  CHECK(a * Rational(2, 3) == Rational(-1));
  CHECK(a / Rational(-3) == Rational(1, 2));
  CHECK(-a == Rational(3, 2));
  CHECK((Rational(1, 3) - Rational(1, 3)).is_zero());
  CHECK(Rational(4, 2).is_integer());
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 7).sign() == -1);
  CHECK(Rational(1, 4).to_double() == 0.25);
}

TEST_CASE("harmonic number stays exact") {
  Rational h;
  for (int k = 1; k <= 30; ++k) h += Rational(1, k);
  CHECK(h.str() == "9304682830147/2329089562800");
}

TEST_CASE("powers") {
  CHECK(Rational::pow(2, 10) == Rational(1024));
  CHECK(Rational::pow(3, -2) == Rational(1, 9));
  CHECK(Rational::pow(7, 0) == Rational(1));
  CHECK(Rational::pow(2, 100).str() == "1267650600228229401496703205376");
  CHECK_THROWS_AS(Rational::pow(0, -1), raf::DomainError);
}

TEST_CASE("parse and print") {
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK_THROWS_AS(Rational::parse("1/x"), raf::FormatError);
  CHECK_THROWS_AS(Rational(1, 0), raf::DomainError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), raf::DomainError);
  std::ostringstream os;
  os << Rational(22, 7);
  CHECK(os.str() == "22/7");
}
