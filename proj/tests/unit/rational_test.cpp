#include <gtest/gtest.h>

#include "diachron/rational.hpp"

using diachron::percent;
using diachron::Rational;

TEST(Rational, ReducedAndZeroDenominator) {
  Rational r(6, 8);
  EXPECT_EQ(r.num(), 3u);
  EXPECT_EQ(r.den(), 4u);
  EXPECT_EQ(Rational(5, 0), Rational());
  EXPECT_EQ(Rational(0, 7), Rational());
  EXPECT_EQ(Rational().den(), 1u);
}

TEST(Rational, OrderingWithoutOverflow) {
  const std::uint64_t big = ~std::uint64_t{0};
  EXPECT_LT(Rational(big - 1, big), Rational(1, 1));
  EXPECT_GT(Rational(big, big - 1), Rational(1, 1));
  EXPECT_LT(Rational(1, 3), Rational(1, 2));
}

TEST(Rational, FixedRoundsHalfUp) {
  EXPECT_EQ(Rational(1, 8).to_fixed(2), "0.13");
  EXPECT_EQ(Rational(1, 200).to_fixed(2), "0.01");
  EXPECT_EQ(Rational(1, 201).to_fixed(2), "0.00");
  EXPECT_EQ(Rational(7, 2).to_fixed(0), "4");
  EXPECT_EQ(Rational(2, 3).to_fixed(6), "0.666667");
  EXPECT_EQ(Rational(100, 1).to_fixed(2), "100.00");
}

TEST(Rational, PublishedPercentages) {
  EXPECT_EQ(percent(1384, 143).to_fixed(2), "10.33");
  EXPECT_EQ(percent(6435, 318).to_fixed(2), "4.94");
  EXPECT_EQ(percent(3306, 1).to_fixed(2), "0.03");
  EXPECT_EQ(percent(0, 0), Rational());
}
