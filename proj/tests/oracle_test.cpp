#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "badcantor/errors.hpp"
#include "badcantor/oracle.hpp"
#include "support.hpp"

namespace badcantor {
namespace {

using testing::Q;

struct OneDim {
  CurveModel curve = testing::line();
  ShiftField shift = build_shift({Polynomial::constant(Q(0))}, RationalInterval(-1, 1));
  Weight r = testing::weights({Q(1)});
};

double as_double(const PowerValue& v) {
  return v.factor.get_d() * std::pow(v.base.get_d(), v.exponent.get_d());
}

TEST(PowerValue, ExactComparison) {
  PowerValue a{Q(1), Q(1, 4), Q(1, 2)};  // 1/2
  PowerValue b{Q(1, 2), Q(1), Q(1)};     // 1/2
  PowerValue c{Q(1), Q(1, 2), Q(3, 2)};  // 2^{-3/2}
  EXPECT_EQ(compare(a, b), 0);
  EXPECT_LT(compare(c, a), 0);
  EXPECT_GT(compare(a, PowerValue{Q(0), Q(1), Q(1)}), 0);
  EXPECT_TRUE(PowerValue({Q(3), Q(0), Q(2)}).is_zero());
}

TEST(Quality, RationalPointsGiveZero) {
  OneDim d;
  EXPECT_TRUE(quality(d.curve, d.shift, d.r, Q(1, 2), Integer(2)).value.is_zero());
  EXPECT_TRUE(quality(d.curve, d.shift, d.r, Q(5, 13), Integer(13)).value.is_zero());
  EXPECT_FALSE(quality(d.curve, d.shift, d.r, Q(5, 13), Integer(12)).value.is_zero());
  EXPECT_THROW(quality(d.curve, d.shift, d.r, Q(1, 2), Integer(0)), std::invalid_argument);
}

TEST(Quality, ParabolaAtOneThird) {
  CurveModel c = testing::parabola();
  ShiftField zero = build_shift({Polynomial::constant(Q(0)), Polynomial::constant(Q(0))}, RationalInterval(-1, 1));
  Weight r = testing::weights({Q(1, 2), Q(1, 2)});
  Quality q3 = quality(c, zero, r, Q(1, 3), Integer(3));
  EXPECT_EQ(dist_to_integer(Q(3) * Q(1, 3)), 0);
  EXPECT_EQ(q3.worst_i, 1u);
  EXPECT_EQ(compare(q3.value, PowerValue{Q(1), Q(1, 3), Q(1)}), 0);
  EXPECT_TRUE(quality(c, zero, r, Q(1, 3), Integer(9)).value.is_zero());
}

TEST(Quality, HandComputedShifted) {
  // m = 5, x = 1/3, theta = (1/7, 1/3 + x/11): |5/3 - 1/7|, |5/9 - 1/3 - 1/33|
  CurveModel c = testing::parabola();
  ShiftField s =
      build_shift({Polynomial::constant(Q(1, 7)), testing::affine(Q(1, 3), Q(1, 11))}, RationalInterval(-1, 1));
  Weight r = testing::weights({Q(1, 2), Q(1, 2)});
  Quality q = quality(c, s, r, Q(1, 3), Integer(5));
  Rational d1 = dist_to_integer(Q(5, 3) - Q(1, 7));
  Rational d2 = dist_to_integer(Q(5, 9) - Q(1, 3) - Q(1, 33));
  Rational expect = std::max(d1 * d1, d2 * d2) * 5;
  EXPECT_EQ(compare(q.value, PowerValue{Q(1), expect, Q(1)}), 0);
  EXPECT_EQ(q.p, (std::vector<Integer>{2, 0}));
}

TEST(Quality, IntegerTranslationInvariance) {
  std::mt19937_64 rng(5);
  CurveModel c = testing::line();
  ShiftField s = build_shift({Polynomial::constant(Q(2, 9))}, RationalInterval(-1, 1));
  Weight r = testing::weights({Q(1)});
  for (int k = 0; k < 50; ++k) {
    Rational x = testing::uniform(rng, Q(-1, 2), Q(1, 2));
    Integer m(static_cast<long>(rng() % 1000) + 1);
    EXPECT_EQ(compare(quality(c, s, r, x, m).value, quality(c, s, r, x + 1, m).value), 0);
  }
}

TEST(ContinuedFraction, Expansion) {
  EXPECT_EQ(continued_fraction(Q(415, 93)), (std::vector<Integer>{4, 2, 6, 7}));
  auto g = continued_fraction(golden_ratio_approximation(128));
  for (std::size_t k = 0; k < 40; ++k) EXPECT_EQ(g[k], 1) << k;
  auto s = continued_fraction(sqrt_approximation(2, 128));
  EXPECT_EQ(s[0], 1);
  for (std::size_t k = 1; k < 40; ++k) EXPECT_EQ(s[k], 2) << k;
}

TEST(Estimate, GoldenRatioReference) {
  OneDim d;
  Rational x = golden_ratio_approximation(160);
  Estimate e = bad_constant_estimate(d.curve, d.shift, d.r, x, 100000, 1000);
  auto cf = convergent_quality_min(x, 100000, 1000);
  ASSERT_TRUE(cf.has_value());
  EXPECT_NEAR(as_double(e.value), 1 / std::sqrt(5.0), 1e-3);
  EXPECT_NEAR(cf->get_d(), 1 / std::sqrt(5.0), 1e-3);
  EXPECT_NEAR(as_double(e.value), cf->get_d(), 1e-9);
}

TEST(Estimate, SqrtTwoReference) {
  OneDim d;
  Rational x = sqrt_approximation(2, 160);
  Estimate e = bad_constant_estimate(d.curve, d.shift, d.r, x, 100000, 1000);
  auto cf = convergent_quality_min(x, 100000, 1000);
  ASSERT_TRUE(cf.has_value());
  EXPECT_NEAR(as_double(e.value), 1 / (2 * std::sqrt(2.0)), 1e-3);
  EXPECT_NEAR(as_double(e.value), cf->get_d(), 1e-9);
}

TEST(Estimate, RandomRationalsGiveZero) {
  OneDim d;
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    long den = 1 + static_cast<long>(rng() % 500);
    Rational x = Q(static_cast<long>(rng() % 2000) - 1000, den);
    Estimate e = bad_constant_estimate(d.curve, d.shift, d.r, x, 500);
    EXPECT_TRUE(e.value.is_zero()) << to_string(x);
    EXPECT_EQ(abs(Rational(e.argmin)), Rational(x.get_den()));
  }
}

TransferInstance spec_instance() {
  TransferInstance inst;
  inst.n = 1;
  inst.L = {{Q(1), Q(0)}, {Q(1, 2), Q(-1)}};
  inst.T = {Q(2), Q(1, 4)};
  return inst;
}

bool dual_ok(const TransferInstance& inst, const TransferReport& rep, const std::vector<Integer>& v) {
  for (std::size_t i = 0; i <= inst.n; ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += rep.dual[i][j] * Rational(v[j]);
    // |L'_0| <= n iota / T_0, |L'_i| <= iota / T_i, compared through n-th powers
    Rational lhs = ipow(abs(s) * inst.T[i] / (i == 0 ? Rational(static_cast<long>(inst.n)) : Rational(1)),
                        static_cast<unsigned long>(inst.n));
    if (lhs > rep.iota_pow_n) return false;
  }
  return true;
}

TEST(Transference, SpecExample) {
  TransferInstance inst = spec_instance();
  TransferReport rep = transference_check(inst, 5);
  EXPECT_EQ(rep.determinant, Q(-1));
  EXPECT_EQ(rep.iota_pow_n, Q(1, 2));
  EXPECT_EQ(rep.dual, (RationalMatrix{{Q(1), Q(1, 2)}, {Q(0), Q(-1)}}));
  EXPECT_TRUE(dual_ok(inst, rep, rep.v));
  EXPECT_TRUE(dual_ok(inst, rep, {Integer(-1), Integer(2)}));
  EXPECT_TRUE(rep.identity_holds);
  Rational lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    Rational a = 0, b = 0;
    for (std::size_t j = 0; j < 2; ++j) {
      a += inst.L[i][j] * Rational(rep.u[j]);
      b += rep.dual[i][j] * Rational(rep.v[j]);
    }
    lhs += a * b;
    rhs += Rational(rep.u[i]) * Rational(rep.v[i]);
  }
  EXPECT_EQ(lhs, rhs);
}

TEST(Transference, IdentityForms) {
  for (std::size_t n : {1u, 2u}) {
    TransferInstance inst;
    inst.n = n;
    inst.L = identity_matrix(n + 1);
    inst.T.assign(n + 1, Q(1));
    TransferReport rep = transference_check(inst, 2);
    EXPECT_EQ(rep.iota_pow_n, Q(1));
    EXPECT_TRUE(dual_ok(inst, rep, rep.v));
    std::vector<Integer> e0(n + 1, Integer(0));
    e0[0] = 1;
    EXPECT_TRUE(dual_ok(inst, rep, e0));
  }
}

TEST(Transference, VacuousWithoutPrimal) {
  TransferInstance inst = spec_instance();
  inst.T = {Q(1, 100), Q(1, 100)};
  try {
    transference_check(inst, 3);
    FAIL() << "no primal solution should exist";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoPrimalSolution);
  }
}

TEST(Transference, DualBoxCoversEverySolution) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 40; ++k) {
    TransferInstance inst = planted_transfer_instance(rng, 1 + static_cast<std::size_t>(k % 2));
    TransferReport rep = transference_check(inst, 5);
    std::vector<Integer> box = dual_box(inst);
    // Every v with the dual bounds in a box twice as wide lies in dual_box.
    const std::size_t d = inst.n + 1;
    std::vector<long> lim(d), v(d);
    for (std::size_t j = 0; j < d; ++j) lim[j] = 2 * to_long_checked(box[j]) + 2, v[j] = -lim[j];
    for (;;) {
      std::vector<Integer> vi(v.begin(), v.end());
      bool zero = std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
      if (!zero && dual_ok(inst, rep, vi)) {
        for (std::size_t j = 0; j < d; ++j) EXPECT_LE(std::abs(v[j]), to_long_checked(box[j]));
      }
      std::size_t j = 0;
      while (j < d && v[j] == lim[j]) v[j] = -lim[j], ++j;
      if (j == d) break;
      ++v[j];
    }
  }
}

// Every removal subset at every step, feasible when deepest-first charging absorbs all kills.
long brute_min_survivors(unsigned R, const std::vector<std::vector<long>>& h) {
  std::function<long(const std::vector<long>&, std::size_t)> go = [&](const std::vector<long>& alive,
                                                                       std::size_t q) -> long {
    // alive: grid indices at generation q
    if (q == h.size()) return static_cast<long>(alive.size());
    const std::size_t kids = alive.size() * R;
    long best = -1;
    for (unsigned long mask = 0; mask < (1UL << kids); ++mask) {
      std::map<long, long> excess;  // ancestor index at the current depth -> kills not yet absorbed
      for (std::size_t a = 0; a < alive.size(); ++a) {
        long kill = 0;
        for (unsigned c = 0; c < R; ++c) kill += (mask >> (a * R + c)) & 1;
        excess[alive[a]] += kill;
      }
      bool ok = true;
      for (std::size_t d = q + 1; d-- > 0 && ok;) {
        std::map<long, long> up;
        for (auto [idx, k] : excess) up[idx / static_cast<long>(R)] += std::max(0L, k - h[q][d]);
        excess = std::move(up);
      }
      for (auto [idx, k] : excess) ok = ok && k == 0;
      if (!ok) continue;
      std::vector<long> next;
      for (std::size_t a = 0; a < alive.size(); ++a)
        for (unsigned c = 0; c < R; ++c)
          if (!((mask >> (a * R + c)) & 1)) next.push_back(alive[a] * R + c);
      long v = next.empty() ? 0 : go(next, q + 1);
      if (best < 0 || v < best) best = v;
    }
    return best;
  };
  return go({0}, 0);
}

TEST(SurvivorSearch, MatchesLiteralBruteForce) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 60; ++k) {
    unsigned R = 2 + static_cast<unsigned>(k % 2);
    std::size_t depth = R == 2 ? 1 + rng() % 3 : 1 + rng() % 2;
    std::vector<std::vector<long>> h(depth);
    for (std::size_t q = 0; q < depth; ++q) {
      h[q].assign(q + 1, 0);
      for (auto& x : h[q]) x = static_cast<long>(rng() % 3);
    }
    auto got = min_survivors_exhaustive(R, h);
    ASSERT_TRUE(got.has_value());
    EXPECT_EQ(*got, brute_min_survivors(R, h)) << "table " << k;
    EXPECT_LE(recursion_survivor_bound(R, h), Rational(*got)) << "table " << k;
  }
}

TEST(SurvivorSearch, MatchesRecursionOnSmallTables) {
  EXPECT_EQ(*min_survivors_exhaustive(4, {{1}}), 3);
  EXPECT_EQ(recursion_survivor_bound(4, {{1}}), Q(3));
  EXPECT_EQ(*min_survivors_exhaustive(5, {{1}, {3, 2}}), 9);
  EXPECT_EQ(recursion_survivor_bound(5, {{1}, {3, 2}}), Q(9));
  EXPECT_LE(recursion_survivor_bound(3, {{0}, {2, 0}}), Rational(*min_survivors_exhaustive(3, {{0}, {2, 0}})));
  EXPECT_EQ(recursion_survivor_bound(4, {{4}}), Q(0));
  EXPECT_EQ(*min_survivors_exhaustive(4, {{4}}), 0);
}

}  // namespace
}  // namespace badcantor
