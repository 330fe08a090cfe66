#include <gtest/gtest.h>

#include <random>
#include <set>
#include <tuple>

#include "badcantor/constants.hpp"
#include "badcantor/dangerous.hpp"
#include "badcantor/errors.hpp"
#include "support.hpp"

namespace badcantor {
namespace {

using testing::Q;

struct Config {
  CurveModel curve;
  ShiftField shift;
  ConstantSheet sheet;
};

Config make_setup(CurveModel curve, std::vector<Polynomial> theta, Weight r, const RationalInterval& I0, long R,
                 const Rational& c) {
  Config s;
  s.curve = std::move(curve);
  s.shift = build_shift(std::move(theta), I0.dilate(Rational(pow3(s.curve.dim() + 1))));
  s.sheet = testing::synthetic_sheet(s.curve, s.shift, r, R, I0, c);
  return s;
}

std::vector<Config> sandwich_setups() {
  std::vector<Config> out;
  RationalInterval I1(Q(-1, 18), Q(1, 18));
  out.push_back(make_setup(testing::line(), {Polynomial::constant(Q(1, 7))}, testing::weights({Q(1)}), I1, 4,
                           Q(1, 10)));
  out.push_back(make_setup(testing::line(), {testing::affine(Q(1, 3), Q(1, 5))}, testing::weights({Q(1)}), I1, 4,
                           Q(1, 10)));
  out.push_back(make_setup(testing::parabola(),
                           {Polynomial::constant(Q(1, 7)), testing::affine(Q(1, 3), Q(1, 11))},
                           testing::weights({Q(1, 2), Q(1, 2)}), RationalInterval(Q(-1, 54), Q(1, 54)), 4,
                           Q(1, 10)));
  return out;
}

std::vector<DangerousWindow> collect(const Config& s, std::size_t want, long max_level = 8) {
  std::vector<DangerousWindow> all;
  for (long q = 1; q <= max_level && all.size() < want; ++q) {
    auto w = enumerate_level(q, s.curve, s.shift, s.sheet, s.sheet.I0);
    all.insert(all.end(), w.begin(), w.end());
  }
  return all;
}

using Key = std::tuple<long, std::vector<Integer>, Integer>;

// Every (m, p, j) of the level by direct scan, with the acceptance tests written out.
std::set<Key> brute_force_level(const Config& s, long q) {
  std::set<Key> keys;
  auto [lo, hi] = level_band(q, s.sheet);
  const RationalInterval& I0 = s.sheet.I0;
  RationalInterval hull = I0.dilate(Rational(pow3(s.curve.dim() + 1)));
  const Rational& c = s.sheet.c;
  for (long m = lo; m <= hi; ++m) {
    SubgridSpec spec = subgrid_spec(I0, m, s.sheet);
    const Rational mr(m);
    for (Integer j = 1; j <= spec.m_star; ++j) {
      SubgridCell cell = spec.cell(I0, s.shift, j);
      Integer p_lo = floor(mr * hull.left - cell.theta1_frozen) - 1;
      Integer p_hi = ceil(mr * hull.right - cell.theta1_frozen) + 1;
      for (Integer p1 = p_lo; p1 <= p_hi; ++p1) {
        Rational y = (Rational(p1) + cell.theta1_frozen) / mr;
        if (!hull.contains(y)) continue;
        Rational d = cell.interval.distance(y);
        // 2 d m^{1+r1} < c
        if (d != 0 && compare_powers(2 * d / c, Q(1), mr, -(1 + s.sheet.weights.r1())) >= 0) continue;
        std::vector<std::vector<Integer>> tails{{p1}};
        for (std::size_t i = 1; i < s.curve.dim(); ++i) {
          Rational target = mr * s.curve.value(i, y) - s.shift.value(i, y);
          Rational k = (s.sheet.f0 + s.sheet.d[i]) * c;
          std::vector<std::vector<Integer>> next;
          for (Integer p = floor(target) - 3; p <= ceil(target) + 3; ++p) {
            Rational dist = abs(target - Rational(p));
            if (dist != 0 && compare_powers(dist / k, Q(1), mr, -s.sheet.weights[i]) >= 0) continue;
            for (auto t : tails) {
              t.push_back(p);
              next.push_back(std::move(t));
            }
          }
          tails = std::move(next);
        }
        for (auto& t : tails) keys.insert({m, t, j});
      }
    }
  }
  return keys;
}

TEST(Subgrid, CellCountExample) {
  Config s = make_setup(testing::parabola(), {Polynomial::identity(), Polynomial::constant(Q(0))},
                       testing::weights({Q(1, 2), Q(1, 2)}), RationalInterval(Q(0), Q(1)), 32, Q(1, 1000));
  s.sheet.d = {Q(1), Q(1, 1000)};
  SubgridSpec spec = subgrid_spec(s.sheet.I0, 100, s.sheet);
  EXPECT_EQ(spec.root, Q(10));
  EXPECT_EQ(spec.m_star, 20000);
  EXPECT_EQ(spec.cell_length, Q(1, 20000));
  try {
    subgrid_spec(s.sheet.I0, 17, s.sheet);
    FAIL() << "m = 17 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MTooSmall);
  }
  EXPECT_NO_THROW(subgrid_spec(s.sheet.I0, 18, s.sheet));
}

TEST(Subgrid, CellsTileI0) {
  Config s = sandwich_setups()[1];
  auto cells = subgrid(s.sheet.I0, 40, s.sheet, s.shift);
  ASSERT_FALSE(cells.empty());
  EXPECT_EQ(cells.front().interval.left, s.sheet.I0.left);
  EXPECT_EQ(cells.back().interval.right, s.sheet.I0.right);
  for (std::size_t k = 1; k < cells.size(); ++k) EXPECT_EQ(cells[k - 1].interval.right, cells[k].interval.left);
  SubgridSpec spec = subgrid_spec(s.sheet.I0, 40, s.sheet);
  for (const auto& c : cells) EXPECT_EQ(spec.index_of(s.sheet.I0, c.interval.midpoint()), c.j);
}

TEST(Levels, BandEdgesAreExact) {
  for (const auto& s : sandwich_setups()) {
    for (long q = 1; q <= 6; ++q) {
      auto [lo, hi] = level_band(q, s.sheet);
      auto next = level_band(q + 1, s.sheet);
      if (lo > hi || next.first > next.second) continue;
      for (long m = std::max(lo, 1L); m <= hi; ++m) EXPECT_EQ(level_of(m, s.sheet), q) << "m = " << m;
      if (lo > 1 && Rational(lo - 1) > m_threshold(s.sheet)) EXPECT_EQ(level_of(lo - 1, s.sheet), q - 1);
      EXPECT_EQ(level_of(hi + 1, s.sheet), q + 1);
    }
  }
}

TEST(Levels, EnumerationMatchesDirectScan) {
  auto setups = sandwich_setups();
  for (std::size_t k = 0; k < setups.size(); ++k) {
    for (long q = 1; q <= 2; ++q) {
      std::set<Key> got;
      for (const auto& w : enumerate_level(q, setups[k].curve, setups[k].shift, setups[k].sheet, setups[k].sheet.I0))
        got.insert({w.m, w.p, w.j});
      EXPECT_EQ(got, brute_force_level(setups[k], q)) << "setup " << k << " level " << q;
    }
  }
}

TEST(Levels, EmptyUpToLambdaPlusOne) {
  // Derived sheets: no window exists at any level q <= lambda1 + 1.
  struct Case {
    CurveModel curve;
    std::vector<Polynomial> theta;
    std::vector<Rational> r;
  };
  std::vector<Case> cases = {
      {testing::parabola(), {Polynomial::constant(Q(1, 7)), testing::affine(Q(1, 3), Q(1, 11))}, {Q(1, 2), Q(1, 2)}},
      {testing::line(), {Polynomial::constant(Q(1, 7))}, {Q(1)}},
      {testing::parabola(), {Polynomial::constant(Q(0)), Polynomial::constant(Q(0))}, {Q(2, 3), Q(1, 3)}},
  };
  for (auto& cs : cases) {
    RationalInterval I0 = select_base_interval(cs.curve, Integer(32), MeasureOracle::lebesgue(), Q(0));
    ShiftField shift = build_shift(cs.theta, I0.dilate(Rational(pow3(cs.curve.dim() + 1))));
    ConstantInputs in;
    in.curve = &cs.curve;
    in.shift = &shift;
    in.weights = testing::weights(cs.r);
    in.R = ScaleBase::integer(32);
    in.I0 = I0;
    in.xi_depth = 2;
    in.xi_samples = 3;
    ConstantSheet s = derive_constants(in);
    ASSERT_GE(s.lambda1, 1);
    for (long q = 1; q <= s.lambda1 + 1; ++q) EXPECT_TRUE(enumerate_level(q, cs.curve, shift, s, I0).empty());
  }
}

TEST(Windows, SandwichOnRandomWindows) {
  std::mt19937_64 rng(99);
  std::size_t checked = 0;
  const std::size_t quota[] = {167, 167, 166};
  auto setups = sandwich_setups();
  for (std::size_t k = 0; k < setups.size(); ++k) {
    const Config& s = setups[k];
    auto all = collect(s, 400);
    ASSERT_GE(all.size(), quota[k]);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(quota[k]);
    const bool constant = s.shift.components[0].is_constant();
    for (const auto& w : all) {
      ++checked;
      Rational spread = w.cover.length() + w.cell.length();
      for (int k = 0; k < 40; ++k) {
        Rational y = testing::uniform(rng, w.center - spread, w.center + spread);
        bool t = in_tilde(w, y), d = in_delta(w, y, s.shift), c = in_cover(w, y);
        if (t) EXPECT_TRUE(d);
        if (d) EXPECT_TRUE(c);
        if (c && s.sheet.I0.contains(y)) EXPECT_TRUE(w.cover.contains(y));
        if (constant && w.cell.contains(y)) EXPECT_EQ(d, within_radius(w, y, Q(1)));
        EXPECT_EQ(within_radius(w, y, Q(1, 2)), within_radius(w, w.center + 4 * (y - w.center), Q(2)));
        EXPECT_EQ(within_radius(w, y, Q(1, 2)), within_radius(w, w.center + 2 * (y - w.center), Q(1)));
      }
      if (w.tilde.length() > 0) {
        for (int k = 1; k < 8; ++k) EXPECT_TRUE(in_tilde(w, w.tilde.left + w.tilde.length() * Q(k, 8)));
      }
      Rational bound = 2 * s.sheet.I0.length() * ipow_signed(Rational(s.sheet.R.R()), -(w.q + 1));
      EXPECT_LE(w.cover.length(), bound);
      EXPECT_TRUE(s.sheet.I0.contains(w.cover));
    }
  }
  EXPECT_EQ(checked, 500u);
}

TEST(MarkHits, SpecExamples) {
  Config s = sandwich_setups()[0];
  auto windows = collect(s, 1);
  ASSERT_FALSE(windows.empty());
  const DangerousWindow& w = windows.front();
  std::vector<RationalInterval> cells = {RationalInterval(w.cover.left - 1, w.cover.left - Q(1, 2)),
                                         RationalInterval(w.cover.left - Q(1, 2), w.cover.right + 1)};
  EXPECT_TRUE(mark_hits({}, cells).marked.empty());
  HitReport one = mark_hits({w}, cells);
  EXPECT_EQ(one.marked, (std::set<std::size_t>{1}));
  EXPECT_EQ(one.max_hits, 1);

  std::vector<RationalInterval> split = {RationalInterval(w.center - 1, w.center),
                                         RationalInterval(w.center, w.center + 1)};
  HitReport two = mark_hits({w}, split);
  EXPECT_EQ(two.marked.size(), 2u);
  EXPECT_EQ(two.hit_cells.front(), (std::vector<std::size_t>{0, 1}));
}

TEST(MarkHits, AgreesWithCoverMeets) {
  Config s = sandwich_setups()[2];
  auto windows = collect(s, 50);
  const RationalInterval& I0 = s.sheet.I0;
  auto cells = partition(I0, 1024);
  HitReport rep = mark_hits(windows, cells);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    bool any = std::any_of(windows.begin(), windows.end(), [&](const auto& w) { return cover_meets(w, cells[k]); });
    EXPECT_EQ(any, rep.marked.count(k) == 1) << "cell " << k;
  }
}

}  // namespace
}  // namespace badcantor
