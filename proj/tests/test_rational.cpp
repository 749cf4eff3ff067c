#include <doctest.h>

#include "morphsynth/rational.hpp"

using morphsynth::Rational;
using morphsynth::validation_error;

TEST_CASE("parsing and canonical text") {
  CHECK(Rational::parse("3.7") == Rational(37, 10));
  CHECK(Rational::parse("0.2") == Rational(1, 5));
  CHECK(Rational::parse("-0.25") == Rational(-1, 4));
  CHECK(Rational::parse("12") == Rational(12));
  CHECK(Rational::parse("7/10") == Rational(7, 10));
  CHECK(Rational::parse("4.8").str() == "4.8");
  CHECK(Rational::parse("1.0").str() == "1");
  CHECK(Rational(1, 3).str() == "1/3");
  CHECK(Rational(-3, 4).str() == "-0.75");
  CHECK(Rational(0).str() == "0");
  CHECK_THROWS_AS(Rational::parse(""), validation_error);
  CHECK_THROWS_AS(Rational::parse("x"), validation_error);
  CHECK_THROWS_AS(Rational::parse("1.2.3"), validation_error);
}

TEST_CASE("arithmetic stays exact") {
  const Rational a = Rational::parse("0.1");
  Rational sum;
  for (int i = 0; i < 10; ++i) sum += a;
  CHECK(sum == Rational(1));
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(5, 2) * Rational(4, 5) == Rational(2));
  CHECK(Rational(1) / Rational(3) == Rational(1, 3));
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK_THROWS_AS(Rational(1) / Rational(0), validation_error);
}

TEST_CASE("ordering") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1) < Rational(0));
  CHECK(Rational(7, 10) <= Rational(7, 10));
  CHECK(Rational(2).abs() == Rational(2));
  CHECK(Rational(-2).abs() == Rational(2));
}

TEST_CASE("overflow raises instead of wrapping") {
  const Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, validation_error);
}
