#include <gtest/gtest.h>

#include <random>

#include "badcantor/enclosure.hpp"
#include "badcantor/errors.hpp"
#include "badcantor/rational.hpp"
#include "badcantor/scale.hpp"
#include "support.hpp"

namespace badcantor {
namespace {

using testing::Q;

TEST(Rational, ParseAndPrintCanonical) {
  EXPECT_EQ(parse_rational("6/4"), Q(3, 2));
  EXPECT_EQ(parse_rational("-7"), Q(-7));
  EXPECT_EQ(to_string(Q(4, 2)), "2/1");
  EXPECT_EQ(to_string(Q(-1, 3)), "-1/3");
  EXPECT_THROW(parse_rational("1/0"), Error);
  EXPECT_THROW(parse_rational("x"), Error);
  EXPECT_THROW(parse_rational(""), Error);
}

TEST(Rational, RoundingHelpers) {
  EXPECT_EQ(floor(Q(-1, 2)), -1);
  EXPECT_EQ(ceil(Q(-1, 2)), 0);
  EXPECT_EQ(floor(Q(7, 2)), 3);
  EXPECT_EQ(dist_to_integer(Q(7, 3)), Q(1, 3));
  EXPECT_EQ(dist_to_integer(Q(-5, 4)), Q(1, 4));
  EXPECT_EQ(floor_root(Integer(80), 2), 8);
  EXPECT_EQ(ceil_root(Integer(80), 2), 9);
  EXPECT_EQ(ceil_root(Integer(81), 4), 3);
}

TEST(Rational, ComparePowersAgainstIntegerArithmetic) {
  // 8^{2/3} = 4, 2^{3/2} < 3, 9^{1/2} = 3
  EXPECT_EQ(compare_powers(Q(8), Q(2, 3), Q(4), Q(1)), 0);
  EXPECT_LT(compare_powers(Q(2), Q(3, 2), Q(3), Q(1)), 0);
  EXPECT_EQ(compare_powers(Q(9), Q(1, 2), Q(3), Q(1)), 0);
  EXPECT_GT(compare_powers(Q(1, 2), Q(-1), Q(1), Q(1)), 0);
}

TEST(Rational, DyadicPowerBoundsBracketTheValue) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    Rational base = Q(1 + static_cast<long>(rng() % 500), 1 + static_cast<long>(rng() % 97));
    Rational e = Q(1 + static_cast<long>(rng() % 7), 1 + static_cast<long>(rng() % 5));
    Rational lo = floor_power_dyadic(base, e, 40), hi = ceil_power_dyadic(base, e, 40);
    EXPECT_LE(compare_powers(lo, Q(1), base, e), 0);
    EXPECT_GE(compare_powers(hi, Q(1), base, e), 0);
    EXPECT_LE(hi - lo, Rational(1, Integer(1) << 40));
  }
}

TEST(Rational, Fnv1aReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Enclosure, ContainsExactValues) {
  Enclosure third(Q(1, 3), 128);
  EXPECT_TRUE(third.contains(Q(1, 3)));
  Enclosure s = sqrt(Enclosure(2L, 128));
  EXPECT_TRUE((s * s).contains(Q(2)));
  EXPECT_LT(s.width(), 1e-30);
  Enclosure e = exp(Enclosure(1L, 128));
  EXPECT_TRUE(e.compare(Q(271828, 100000)) == 1);
  EXPECT_TRUE(e.compare(Q(271829, 100000)) == -1);
  EXPECT_TRUE(log(e).contains(Q(1)));
}

TEST(Enclosure, RationalBoundsAreOrdered) {
  Enclosure p = pow(Enclosure(Q(3, 7), 256), Q(5, 3));
  EXPECT_LE(p.lower_rational(), p.upper_rational());
  EXPECT_GE(compare_powers(p.upper_rational(), Q(1), Q(3, 7), Q(5, 3)), 0);
  EXPECT_LE(compare_powers(p.lower_rational(), Q(1), Q(3, 7), Q(5, 3)), 0);
}

TEST(ScaleBase, IntegerAndTestMode) {
  ScaleBase r = ScaleBase::integer(32);
  EXPECT_FALSE(r.test_mode());
  EXPECT_EQ(r.compare_power(Q(1, 5), Q(2), 128), 0);
  EXPECT_EQ(r.compare_power(Q(2, 5), Q(3), 128), 1);
  ScaleBase e3 = ScaleBase::exp_of(Q(3));
  EXPECT_TRUE(e3.test_mode());
  EXPECT_TRUE(e3.ln(128).contains(Q(3)));
  EXPECT_THROW(e3.R(), Error);
}

}  // namespace
}  // namespace badcantor
