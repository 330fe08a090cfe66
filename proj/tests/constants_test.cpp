#include <gtest/gtest.h>

#include <cmath>

#include "badcantor/constants.hpp"
#include "badcantor/errors.hpp"
#include "badcantor/lattice.hpp"
#include "support.hpp"

namespace badcantor {
namespace {

using testing::Q;

ConstantSheet parabola_sheet(long R, const RationalInterval& I0, long depth = 2) {
  static const CurveModel curve = testing::parabola();
  static const ShiftField shift =
      build_shift({Polynomial::constant(Q(1, 7)), testing::affine(Q(1, 3), Q(1, 11))}, RationalInterval(-1, 1));
  ConstantInputs in;
  in.curve = &curve;
  in.shift = &shift;
  in.weights = testing::weights({Q(1, 2), Q(1, 2)});
  in.R = ScaleBase::integer(R);
  in.I0 = I0;
  in.xi_depth = depth;
  in.xi_samples = 5;
  return derive_constants(in);
}

TEST(Exponents, TestModeExamples) {
  Exponents a = derive_exponents(ScaleBase::exp_of(Q(3)), testing::weights({Q(1, 2), Q(1, 2)}), 2);
  EXPECT_TRUE(a.beta.contains(Q(2)));
  EXPECT_TRUE(a.beta_prime.contains(Q(2)));
  Exponents b = derive_exponents(ScaleBase::exp_of(Q(2)), testing::weights({Q(1)}), 1);
  EXPECT_TRUE(b.beta.contains(Q(1)));
  EXPECT_TRUE(b.beta_prime.contains(Q(1)));
}

TEST(Exponents, EpsilonStrictlyBelowQuarter) {
  for (auto w : {std::vector<Rational>{Q(1)}, {Q(1, 2), Q(1, 2)}, {Q(2, 3), Q(1, 3)}, {Q(1, 2), Q(1, 4), Q(1, 4)}}) {
    Weight r = testing::weights(w);
    Exponents e = derive_exponents(ScaleBase::integer(32), r, r.dim());
    EXPECT_LT(e.epsilon, r.rn() / Rational(static_cast<long>(4 * r.dim())));
    EXPECT_GT(e.epsilon, 0);
  }
}

TEST(Xi, OrbitNormAtOrigin) {
  // a(t)Z^2 with R = e^2, r = (1): the shortest vector is e^{-1} at t = 1.
  CurveModel c = testing::line();
  Weight r = testing::weights({Q(1)});
  ShortestVector sv = shortest_nonzero(orbit_lattice(c, r, ScaleBase::exp_of(Q(2)), Q(0), Q(1)));
  EXPECT_NEAR(sv.norm.approx(), std::exp(-1.0), 1e-15);
  ShortestVector near0 = shortest_nonzero(orbit_lattice(c, r, ScaleBase::exp_of(Q(2)), Q(0), Q(1, 1000)));
  EXPECT_NEAR(near0.norm.approx(), 1.0, 2e-3);
}

TEST(Xi, CappedBelowOrbitBound) {
  CurveModel c = testing::line();
  Weight r = testing::weights({Q(1)});
  Enclosure xi = estimate_xi(c, r, ScaleBase::integer(32), RationalInterval(Q(0), Q(1, 100)), 1, 3);
  EXPECT_TRUE(xi.certainly_less(Enclosure(Q(2), 128) / exp(Enclosure(1L, 128))));
  EXPECT_TRUE(xi.positive());
}

TEST(SmallConstants, HandComputedExample) {
  ConstantSheet s;
  s.R = ScaleBase::exp_of(Q(3));
  s.weights = testing::weights({Q(1, 2), Q(1, 2)});
  s.n = 2;
  Exponents e = derive_exponents(s.R, s.weights, 2);
  s.beta = e.beta;
  s.xi = Enclosure(1L, 128);
  s.f0 = Q(3);
  s.d = {Q(1, 1000), Q(1, 1000)};
  compute_small_constants(s);
  EXPECT_EQ(s.lambda1, 2);
  EXPECT_NEAR(s.k1.approx(), std::exp(-4.0) / 3, 1e-15);
}

TEST(SmallConstants, OneDimensionalFormula) {
  ConstantSheet s;
  s.R = ScaleBase::integer(32);
  s.weights = testing::weights({Q(1)});
  s.n = 1;
  s.beta = derive_exponents(s.R, s.weights, 1).beta;
  s.xi = Enclosure(Q(1, 2), 128);
  s.f0 = Q(2);
  s.d = {Q(1, 10)};
  compute_small_constants(s);
  long double beta = std::log(32.0L) / 2;
  long double lam = std::ceil(std::log(2.0L / 0.5L) / beta);
  long double k1 = 0.5L / 2 * std::exp(-beta * lam);
  long double c = k1 * k1 * 0.1L / (200 * 2.0L * 1.1L * 1.1L * std::pow(32.0L, 4));
  EXPECT_EQ(s.lambda1, static_cast<long>(lam));
  EXPECT_NEAR(static_cast<double>(s.c_formula.approx() / c), 1.0, 1e-12);
  EXPECT_LE(s.c, s.c_formula.lower_rational());
  EXPECT_GT(s.c, 0);
}

TEST(SmallConstants, RejectsSmallR) {
  ConstantSheet s;
  s.R = ScaleBase::integer(20);
  s.weights = testing::weights({Q(1)});
  s.n = 1;
  s.beta = derive_exponents(s.R, s.weights, 1).beta;
  s.xi = Enclosure(Q(1, 2), 128);
  s.f0 = Q(2);
  s.d = {Q(1, 10)};
  s.I0 = RationalInterval(Q(0), Q(1, 9));
  try {
    derive_small_constants(s);
    FAIL() << "R = 20 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RInadmissible);
    EXPECT_NE(std::string(e.what()).find("R^alpha >= 21C^2"), std::string::npos);
  }
}

TEST(Sheet, InvariantsRederived) {
  RationalInterval I0(Q(-1, 54), Q(1, 54));
  ConstantSheet s = parabola_sheet(32, I0);
  EXPECT_TRUE(s.beta.contains(Q(0)) == false);
  EXPECT_NEAR(s.beta.approx(), std::log(32.0) / 1.5, 1e-14);
  EXPECT_NEAR(s.beta_prime.approx(), std::log(32.0) * 2 / 3, 1e-14);
  EXPECT_EQ(s.epsilon, Q(1, 32));
  long double xi = s.xi.approx();
  EXPECT_LT(xi, 3 / std::exp(1.0L));
  long double lam = std::ceil(std::log(3 / xi) / (s.beta.approx() * 0.5L));
  EXPECT_EQ(s.lambda1, static_cast<long>(lam));
  EXPECT_LT(std::pow(s.k1.approx(), 1.5), std::pow(32.0, -static_cast<double>(s.lambda1)));
  EXPECT_GT(Q(32) * I0.length(), Q(1));
  EXPECT_LE(s.c, s.c_formula.lower_rational());
  EXPECT_LT(s.c_formula.width(), 1e-30 * s.c_formula.approx());
}

TEST(Sheet, CDecreasesWithR) {
  RationalInterval I0(Q(-1, 54), Q(1, 54));
  Rational c32 = parabola_sheet(32, I0, 1).c;
  Rational c64 = parabola_sheet(64, I0, 1).c;
  Rational c128 = parabola_sheet(128, I0, 1).c;
  EXPECT_GT(c32, c64);
  EXPECT_GT(c64, c128);
}

TEST(Sheet, Deterministic) {
  RationalInterval I0(Q(-1, 54), Q(1, 54));
  ConstantSheet a = parabola_sheet(32, I0, 1), b = parabola_sheet(32, I0, 1);
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.lambda1, b.lambda1);
  EXPECT_EQ(a.xi.decimal(), b.xi.decimal());
}

}  // namespace
}  // namespace badcantor
