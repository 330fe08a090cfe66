#pragma once

#include <optional>
#include <set>
#include <vector>

#include "badcantor/constants.hpp"
#include "badcantor/core.hpp"

namespace badcantor {

struct SubgridCell {
  Integer j;
  RationalInterval interval;
  Rational center;
  Rational theta1_frozen;
};

/// Geometry of the subgrid I0^{j,m}: cells of length c|I0|/(2 d1 ceilroot(m, r1)).
struct SubgridSpec {
  long m = 0;
  Rational root;         // smallest k/2^64 >= m^{r1}
  Rational cell_length;
  Integer m_star;

  SubgridCell cell(const RationalInterval& I0, const ShiftField& shift, const Integer& j) const;
  /// 1-based index of a cell containing x, clamped to [1, m_star].
  Integer index_of(const RationalInterval& I0, const Rational& x) const;
};

/// smallest k/2^64 >= m^{r}.
Rational ceilroot(long m, const Rational& r);

SubgridSpec subgrid_spec(const RationalInterval& I0, long m, const ConstantSheet& sheet);
std::vector<SubgridCell> subgrid(const RationalInterval& I0, long m, const ConstantSheet& sheet,
                                 const ShiftField& shift);

/// Strict lower bound on m: 17 |I0|^{-1} d1.
Rational m_threshold(const ConstantSheet& sheet);

/// Level of m: the q with 2c|I0|^{-1}R^{q+1} <= m^{1+r1} < 2c|I0|^{-1}R^{q+2} (may be negative).
long level_of(long m, const ConstantSheet& sheet);
/// Integers m in the level-q band that also exceed the m threshold; empty when lo > hi.
std::pair<long, long> level_band(long q, const ConstantSheet& sheet);

struct DangerousWindow {
  long q = 0;
  long m = 0;
  std::vector<Integer> p;  // p_1..p_n
  Integer j;
  Rational center;          // (p_1 + theta_1^{j,m}) / m
  RationalInterval cell;    // I0^{j,m}
  RationalInterval tilde;   // inner rational approximation of the tilde window
  RationalInterval cover;   // outer rational approximation of the 4x window, within I0
  Rational c;
  Rational r1;

  bool operator<(const DangerousWindow& o) const;
};

/// |y - center| < k * c / m^{1+r1}, decided exactly.
bool within_radius(const DangerousWindow& w, const Rational& y, const Rational& k);
bool in_tilde(const DangerousWindow& w, const Rational& y);
bool in_delta(const DangerousWindow& w, const Rational& y, const ShiftField& shift);
bool in_cover(const DangerousWindow& w, const Rational& y);
/// The closed cell meets the open 4x window.
bool cover_meets(const DangerousWindow& w, const RationalInterval& cell);

std::vector<DangerousWindow> enumerate_level(long q, const CurveModel& curve, const ShiftField& shift,
                                             const ConstantSheet& sheet, const RationalInterval& I0);

RationalInterval cover_window(const DangerousWindow& w);

struct HitReport {
  std::set<std::size_t> marked;            // indices into the cell list
  std::vector<std::size_t> hits_per_window;
  std::vector<std::vector<std::size_t>> hit_cells;  // per window, ascending
  long max_hits = 0;
};

/// Cells (sorted, disjoint interiors) meeting the cover of some window.
HitReport mark_hits(const std::vector<DangerousWindow>& windows, const std::vector<RationalInterval>& cells);

}  // namespace badcantor
