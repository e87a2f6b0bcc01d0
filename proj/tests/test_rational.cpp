#include "threewc/rational.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

namespace poly = threewc::poly;
using poly::Rational;

TEST(Rational, CanonicalFormAfterArithmetic) {
  Rational a = poly::rat(2, 4);
  EXPECT_EQ(a.get_num(), 1);
  EXPECT_EQ(a.get_den(), 2);

  Rational b = poly::rat(1, 3) + poly::rat(1, 6);
  EXPECT_EQ(b, poly::rat(1, 2));
  EXPECT_EQ(b.get_den(), 2);

  Rational c = poly::rat(-4, 6);
  EXPECT_EQ(c.get_num(), -2);
  EXPECT_EQ(c.get_den(), 3);
}

TEST(Rational, ExactArithmeticNoDrift) {
  // 1/3 summed three times is exactly 1; doubles would drift.
  Rational third = poly::rat(1, 3);
  EXPECT_EQ(third + third + third, poly::rat(1));
  // Large numerators stay exact.
  Rational big = poly::rat(1000000007) * poly::rat(998244353);
  EXPECT_EQ(big / poly::rat(998244353), poly::rat(1000000007));
}

TEST(Rational, FloorMatchesIntegerDivisionOracle) {
  // floor(p/q) for a grid of signed values against truncating long division
  // corrected for sign.
  for (long p = -12; p <= 12; ++p) {
    for (long q = 1; q <= 5; ++q) {
      long expected = p / q;
      if (p % q != 0 && p < 0) --expected;
      EXPECT_EQ(poly::rational_floor(poly::rat(p, q)), poly::rat(expected))
          << p << "/" << q;
    }
  }
  EXPECT_EQ(poly::rational_floor(poly::rat(7, 2)), poly::rat(3));
  EXPECT_EQ(poly::rational_floor(poly::rat(-7, 2)), poly::rat(-4));
  EXPECT_EQ(poly::rational_floor(poly::rat(6, 3)), poly::rat(2));
}

TEST(Rational, ParseAcceptsIntegerAndFractionForms) {
  EXPECT_EQ(poly::parse_rational("3"), poly::rat(3));
  EXPECT_EQ(poly::parse_rational("-3"), poly::rat(-3));
  EXPECT_EQ(poly::parse_rational("+3"), poly::rat(3));
  EXPECT_EQ(poly::parse_rational("1/2"), poly::rat(1, 2));
  EXPECT_EQ(poly::parse_rational("-2/4"), poly::rat(-1, 2));
  EXPECT_EQ(poly::parse_rational("0"), Rational(0));
}

TEST(Rational, ParseRejectsInexactOrMalformed) {
  EXPECT_THROW(poly::parse_rational("0.5"), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational("1e-3"), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational(""), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational("1/"), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational("/2"), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational("1/-2"), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational("a/b"), std::invalid_argument);
  EXPECT_THROW(poly::parse_rational("1 / 2"), std::invalid_argument);
  EXPECT_THROW(poly::rat(1, 0), std::invalid_argument);
}

TEST(Rational, RoundTripThroughText) {
  for (long p = -9; p <= 9; ++p) {
    for (long q = 1; q <= 7; ++q) {
      Rational r = poly::rat(p, q);
      EXPECT_EQ(poly::parse_rational(poly::to_string(r)), r);
    }
  }
}

TEST(Rational, DoubleConversion) {
  EXPECT_DOUBLE_EQ(poly::to_double(poly::rat(1, 2)), 0.5);
  EXPECT_DOUBLE_EQ(poly::to_double(poly::rat(-3, 4)), -0.75);
}
