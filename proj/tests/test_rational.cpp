#include <doctest.h>

#include <random>

#include "rotkit/bigfloat.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/rational.hpp"

using rotkit::BigInt;
using rotkit::Fraction;
using rotkit::Rational;

TEST_CASE("rationals are kept in lowest terms with positive denominator") {
  const Rational r(BigInt(6), BigInt(-8));
  CHECK(r.num() == -3);
  CHECK(r.den() == 4);
  CHECK(r.str() == "-3/4");
  CHECK(Rational::parse("10/4") == Rational(BigInt(5), BigInt(2)));
  CHECK(Rational::parse("-7") == Rational(-7));
  CHECK(Rational(3).str() == "3/1");
}

TEST_CASE("floor and fractional part are exact") {
  CHECK(Rational::parse("9/8").floor() == 1);
  CHECK(Rational::parse("9/8").frac() == Rational::parse("1/8"));
  CHECK(Rational::parse("-1/3").floor() == -1);
  CHECK(Rational::parse("-1/3").frac() == Rational::parse("2/3"));
  CHECK(Rational::parse("-1/3").ceil() == 0);
  CHECK(Rational(2).frac() == rotkit::Rational(0));
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(Rational::parse("1/0"), rotkit::ParseError);
  CHECK_THROWS_AS(Rational::parse("a/2"), rotkit::ParseError);
  CHECK_THROWS_AS(Rational::parse("1/-2"), rotkit::ParseError);
  CHECK_THROWS_AS(Rational::parse(""), rotkit::ParseError);
  CHECK_THROWS_AS(Rational::parse("1/2/3"), rotkit::ParseError);
}

TEST_CASE("decimal parsing is exact") {
  CHECK(Rational::parse_decimal("1e-18") == Rational(1) / Rational(10).pow(18));
  CHECK(Rational::parse_decimal("0.25") == Rational::parse("1/4"));
  CHECK(Rational::parse_decimal("2.5e1") == Rational(25));
  CHECK(Rational::parse_decimal("1/3") == Rational::parse("1/3"));
}

TEST_CASE("string round trip over random rationals") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> dist(-1000000, 1000000);
  for (int i = 0; i < 1000; ++i) {
    long d = dist(rng);
    if (d == 0) d = 1;
    const Rational r(BigInt(dist(rng)), BigInt(d));
    CHECK(Rational::parse(r.str()) == r);
    CHECK(r.floor() <= r.num() / r.den() + 1);
    CHECK(Rational(r.floor()) <= r);
    CHECK(r < Rational(BigInt(r.floor() + 1)));
  }
}

TEST_CASE("fractions enforce 0 <= p <= q, gcd = 1") {
  CHECK_NOTHROW(Fraction(0, 1));
  CHECK_NOTHROW(Fraction(1, 1));
  CHECK_THROWS_AS(Fraction(2, 4), rotkit::InvalidArgument);
  CHECK_THROWS_AS(Fraction(3, 2), rotkit::InvalidArgument);
  CHECK_THROWS_AS(Fraction(1, 0), rotkit::InvalidArgument);
  CHECK(Fraction(1, 3) < Fraction(1, 2));
  CHECK(Fraction::parse("2/4") == Fraction(1, 2));
}

TEST_CASE("big floats convert back to rationals exactly") {
  const Rational third = Rational::parse("1/3");
  const rotkit::BigFloat lo(third, 128, rotkit::Round::down);
  const rotkit::BigFloat hi(third, 128, rotkit::Round::up);
  CHECK(lo.to_rational() < third);
  CHECK(third < hi.to_rational());
  CHECK(hi.to_rational() - lo.to_rational() == Rational::pow2(-129));
  CHECK(rotkit::BigFloat(Rational::parse("3/4"), 64).to_fixed(4) == "0.7500");
}

TEST_CASE("BigFloat zero converts to rational zero") {
  CHECK(rotkit::BigFloat(rotkit::Rational(0), 128).to_rational() == rotkit::Rational(0));
  CHECK(rotkit::BigFloat(rotkit::Rational(0), 128).to_rational().sign() == 0);
}
