#include "badcantor/dangerous.hpp"

#include <algorithm>
#include <cmath>

#include "badcantor/parallel.hpp"

namespace badcantor {

namespace {

long double log_rational(const Rational& x) {
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, x.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
  return std::log(static_cast<long double>(mn) / static_cast<long double>(md)) +
         static_cast<long double>(en - ed) * std::log(2.0L);
}

// dist < k c m^{-(1+r1)}
bool below_radius(const Rational& dist, const Rational& k, const Rational& c, long m, const Rational& r1) {
  if (dist <= 0) return true;
  return compare_powers(dist / (k * c), Rational(1), Rational(m), -(1 + r1)) < 0;
}

Rational band_scale(const ConstantSheet& s) { return 2 * s.c / s.I0.length(); }

// A R^k as an exact rational.
Rational scaled_power(const ConstantSheet& s, long k) { return band_scale(s) * ipow_signed(Rational(s.R.R()), k); }

bool power_at_least(long m, const Rational& e, const Rational& x) {
  return compare_powers(Rational(m), e, x, Rational(1)) >= 0;
}

// Smallest m >= 1 with m^e >= x.
long least_m_at_least(const Rational& e, const Rational& x) {
  if (x <= 1) return 1;
  long double approx = std::exp(log_rational(x) / static_cast<long double>(e.get_d()));
  if (approx > 9.0e15L) throw Error(ErrorCode::DimensionMismatch, "level band exceeds the supported m range");
  long m = std::max(1L, static_cast<long>(std::floor(approx)));
  while (m > 1 && power_at_least(m - 1, e, x)) --m;
  while (!power_at_least(m, e, x)) ++m;
  return m;
}

}  // namespace

Rational ceilroot(long m, const Rational& r) { return ceil_power_dyadic(Rational(m), r, 64); }

Rational m_threshold(const ConstantSheet& s) { return 17 * s.d1() / s.I0.length(); }

SubgridSpec subgrid_spec(const RationalInterval& I0, long m, const ConstantSheet& s) {
  if (!(Rational(m) > m_threshold(s))) {
    throw Error(ErrorCode::MTooSmall, "m = " + std::to_string(m) + " <= 17|I0|^{-1}d1 = " + to_string(m_threshold(s)));
  }
  SubgridSpec spec;
  spec.m = m;
  spec.root = ceilroot(m, s.weights.r1());
  spec.cell_length = s.c * I0.length() / (2 * s.d1() * spec.root);
  spec.m_star = ceil(I0.length() / spec.cell_length);
  return spec;
}

SubgridCell SubgridSpec::cell(const RationalInterval& I0, const ShiftField& shift, const Integer& j) const {
  if (j < 1 || j > m_star) throw std::out_of_range("subgrid cell index out of range");
  Rational left = I0.left + cell_length * Rational(j - 1);
  Rational right = (j == m_star) ? I0.right : Rational(I0.left + cell_length * Rational(j));
  SubgridCell c;
  c.j = j;
  c.interval = RationalInterval(left, right);
  c.center = c.interval.midpoint();
  c.theta1_frozen = shift.value(0, c.center);
  return c;
}

Integer SubgridSpec::index_of(const RationalInterval& I0, const Rational& x) const {
  Integer j = floor((x - I0.left) / cell_length) + 1;
  if (j < 1) j = 1;
  if (j > m_star) j = m_star;
  return j;
}

std::vector<SubgridCell> subgrid(const RationalInterval& I0, long m, const ConstantSheet& s, const ShiftField& shift) {
  SubgridSpec spec = subgrid_spec(I0, m, s);
  if (spec.m_star > 10000000) throw std::length_error("subgrid: too many cells to materialize");
  std::vector<SubgridCell> cells;
  for (Integer j = 1; j <= spec.m_star; ++j) cells.push_back(spec.cell(I0, shift, j));
  return cells;
}

long level_of(long m, const ConstantSheet& s) {
  const Rational e = 1 + s.weights.r1();
  const Rational mp = Rational(m);
  long double lr = log_rational(Rational(s.R.R()));
  long double approx = (static_cast<long double>(e.get_d()) * std::log(static_cast<long double>(m)) -
                        log_rational(band_scale(s))) / lr - 1;
  long q = static_cast<long>(std::floor(approx));
  // Adjust so that A R^{q+1} <= m^e < A R^{q+2}.
  while (!power_at_least(m, e, scaled_power(s, q + 1))) --q;
  while (power_at_least(m, e, scaled_power(s, q + 2))) ++q;
  return q;
}

std::pair<long, long> level_band(long q, const ConstantSheet& s) {
  const Rational e = 1 + s.weights.r1();
  long lo = least_m_at_least(e, scaled_power(s, q + 1));
  long hi = least_m_at_least(e, scaled_power(s, q + 2)) - 1;
  Rational thr = m_threshold(s);
  long above = to_long_checked(floor(thr)) + 1;
  lo = std::max(lo, above);
  return {lo, hi};
}

bool DangerousWindow::operator<(const DangerousWindow& o) const {
  if (m != o.m) return m < o.m;
  if (p[0] != o.p[0]) return p[0] < o.p[0];
  if (j != o.j) return j < o.j;
  return p < o.p;
}

bool within_radius(const DangerousWindow& w, const Rational& y, const Rational& k) {
  return below_radius(abs(y - w.center), k, w.c, w.m, w.r1);
}

bool in_tilde(const DangerousWindow& w, const Rational& y) {
  return w.cell.contains(y) && within_radius(w, y, Rational(1, 2));
}

bool in_delta(const DangerousWindow& w, const Rational& y, const ShiftField& shift) {
  if (!w.cell.contains(y)) return false;
  Rational target = (Rational(w.p[0]) + shift.value(0, y)) / Rational(w.m);
  return below_radius(abs(y - target), Rational(1), w.c, w.m, w.r1);
}

bool in_cover(const DangerousWindow& w, const Rational& y) { return within_radius(w, y, Rational(2)); }

bool cover_meets(const DangerousWindow& w, const RationalInterval& cell) {
  return below_radius(cell.distance(w.center), Rational(2), w.c, w.m, w.r1);
}

RationalInterval cover_window(const DangerousWindow& w) { return w.cover; }

namespace {

struct LevelContext {
  const CurveModel& curve;
  const ShiftField& shift;
  const ConstantSheet& s;
  const RationalInterval& I0;
  RationalInterval hull;
  long q;
};

void window_geometry(DangerousWindow& w, const LevelContext& ctx) {
  const Rational e = 1 + w.r1;
  Rational rad_in = w.c / (2 * ceil_power_dyadic(Rational(w.m), e, 64));
  Rational l = std::max(Rational(w.center - rad_in), w.cell.left);
  Rational r = std::min(Rational(w.center + rad_in), w.cell.right);
  if (l <= r) {
    w.tilde = RationalInterval(l, r);
  } else {
    Rational near = w.center < w.cell.left ? w.cell.left : w.cell.right;
    w.tilde = RationalInterval(near, near);
  }
  Rational rad_out = 2 * w.c / floor_power_dyadic(Rational(w.m), e, 64);
  Rational clamp = ctx.I0.length() * ipow_signed(Rational(ctx.s.R.R()), -(ctx.q + 1));
  if (clamp < rad_out) rad_out = clamp;
  Rational cl = std::max(Rational(w.center - rad_out), ctx.I0.left);
  Rational cr = std::min(Rational(w.center + rad_out), ctx.I0.right);
  if (cr < cl) cr = cl;
  w.cover = RationalInterval(cl, cr);
}

// All p_i (i >= 2) with |m phi_i(y) - theta_i(y) - p_i| < (f0 + d_i) c / m^{r_i}; empty if some i has none.
std::vector<std::vector<Integer>> tail_candidates(const LevelContext& ctx, long m, const Rational& y) {
  std::vector<std::vector<Integer>> per_i;
  const std::size_t n = ctx.curve.dim();
  for (std::size_t i = 1; i < n; ++i) {
    Rational target = Rational(m) * ctx.curve.value(i, y) - ctx.shift.value(i, y);
    Rational k = ctx.s.f0 + ctx.s.d[i];
    Rational ub = k * ctx.s.c;  // m^{-r_i} <= 1
    std::vector<Integer> ok;
    for (Integer p = floor(target - ub); p <= ceil(target + ub); ++p) {
      Rational dist = abs(target - Rational(p));
      if (dist == 0 || compare_powers(dist / (k * ctx.s.c), Rational(1), Rational(m), -ctx.s.weights[i]) < 0) {
        ok.push_back(p);
      }
    }
    if (ok.empty()) return {};
    per_i.push_back(std::move(ok));
  }
  // Cartesian product in lexicographic order.
  std::vector<std::vector<Integer>> out{{}};
  for (const auto& choices : per_i) {
    std::vector<std::vector<Integer>> next;
    for (const auto& prefix : out)
      for (const auto& p : choices) {
        auto v = prefix;
        v.push_back(p);
        next.push_back(std::move(v));
      }
    out = std::move(next);
  }
  return out;
}

std::vector<DangerousWindow> windows_for_m(const LevelContext& ctx, long m) {
  const ConstantSheet& s = ctx.s;
  const RationalInterval& I0 = ctx.I0;
  const Polynomial& theta1 = ctx.shift.components[0];
  SubgridSpec spec = subgrid_spec(I0, m, s);
  const Rational ell = spec.cell_length;
  const Rational mr(m);
  const Rational half_spread = s.d1() * I0.length() / 2;
  const Rational t_mid = theta1(I0.midpoint());
  Integer p_lo = floor(mr * (I0.left - ell) - t_mid - half_spread);
  Integer p_hi = ceil(mr * (I0.right + ell) - t_mid + half_spread);
  // Resolution of the fixed-point iteration.
  unsigned bits = 8;
  while (Rational(1, Integer(1) << bits) > ell / 256) ++bits;

  std::vector<DangerousWindow> out;
  for (Integer p1 = p_lo; p1 <= p_hi; ++p1) {
    Rational xs;
    if (theta1.is_constant()) {
      xs = (Rational(p1) + t_mid) / mr;
    } else {
      xs = I0.midpoint();
      for (int it = 0; it < 400; ++it) {
        Rational next = floor_dyadic((Rational(p1) + theta1(xs)) / mr, bits);
        bool done = abs(next - xs) <= ell / 128;
        xs = next;
        if (done) break;
      }
    }
    RationalInterval near(xs - ell, xs + ell);
    auto overlap = near.intersect(I0);
    if (!overlap) continue;
    Integer j_lo = spec.index_of(I0, overlap->left);
    Integer j_hi = spec.index_of(I0, overlap->right);
    for (Integer j = j_lo; j <= j_hi; ++j) {
      SubgridCell cell = spec.cell(I0, ctx.shift, j);
      Rational y = (Rational(p1) + cell.theta1_frozen) / mr;
      if (!below_radius(cell.interval.distance(y), Rational(1, 2), s.c, m, s.weights.r1())) continue;
      if (!ctx.hull.contains(y)) continue;
      for (auto& tail : tail_candidates(ctx, m, y)) {
        DangerousWindow w;
        w.q = ctx.q;
        w.m = m;
        w.p.push_back(p1);
        for (auto& t : tail) w.p.push_back(std::move(t));
        w.j = j;
        w.center = y;
        w.cell = cell.interval;
        w.c = s.c;
        w.r1 = s.weights.r1();
        window_geometry(w, ctx);
        out.push_back(std::move(w));
      }
    }
  }
  return out;
}

}  // namespace

std::vector<DangerousWindow> enumerate_level(long q, const CurveModel& curve, const ShiftField& shift,
                                             const ConstantSheet& sheet, const RationalInterval& I0) {
  if (q < 1) throw std::invalid_argument("enumerate_level: q must be at least 1");
  if (curve.dim() != shift.dim()) throw Error(ErrorCode::DimensionMismatch, "curve and shift dimensions differ");
  auto [lo, hi] = level_band(q, sheet);
  if (lo > hi) return {};
  LevelContext ctx{curve, shift, sheet, I0, I0.dilate(Rational(pow3(curve.dim() + 1))), q};
  std::vector<std::vector<DangerousWindow>> per_m(static_cast<std::size_t>(hi - lo + 1));
  parallel_for(per_m.size(), [&](std::size_t k) { per_m[k] = windows_for_m(ctx, lo + static_cast<long>(k)); });
  std::vector<DangerousWindow> all;
  for (auto& v : per_m)
    for (auto& w : v) all.push_back(std::move(w));
  std::sort(all.begin(), all.end());
  return all;
}

HitReport mark_hits(const std::vector<DangerousWindow>& windows, const std::vector<RationalInterval>& cells) {
  HitReport rep;
  for (const auto& w : windows) {
    auto first = std::lower_bound(cells.begin(), cells.end(), w.cover.left,
                                  [](const RationalInterval& c, const Rational& x) { return c.right < x; });
    std::vector<std::size_t> hit;
    for (auto it = first; it != cells.end() && it->left <= w.cover.right; ++it) {
      if (cover_meets(w, *it)) {
        rep.marked.insert(static_cast<std::size_t>(it - cells.begin()));
        hit.push_back(static_cast<std::size_t>(it - cells.begin()));
      }
    }
    std::size_t hits = hit.size();
    rep.hits_per_window.push_back(hits);
    rep.hit_cells.push_back(std::move(hit));
    rep.max_hits = std::max<long>(rep.max_hits, static_cast<long>(hits));
  }
  return rep;
}

}  // namespace badcantor
