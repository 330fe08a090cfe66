#include "badcantor/cantor.hpp"

#include <algorithm>

#include "badcantor/lattice.hpp"
#include "badcantor/parallel.hpp"

namespace badcantor {

std::string_view removal_cause_name(RemovalCause c) {
  switch (c) {
    case RemovalCause::Measure: return "measure";
    case RemovalCause::LatticeEscape: return "lattice-escape";
    case RemovalCause::DangerousHit: return "dangerous-hit";
  }
  return "?";
}

std::vector<EscapeClass> escape_schedule(long q) {
  std::vector<EscapeClass> out;
  for (long l = std::max(1L, (q + 7) / 8); 4 * l <= q; ++l) out.push_back({0, l});
  std::vector<EscapeClass> tail;
  for (long l = 1; 8 * l < q; ++l) tail.push_back({q - 4 * l, l});
  std::sort(tail.begin(), tail.end(), [](const EscapeClass& a, const EscapeClass& b) { return a.p < b.p; });
  for (auto& e : tail)
    if (e.p != 0) out.push_back(e);
  return out;
}

Rational CantorState::cell_length(long generation) const {
  return sheet->I0.length() / Rational(ipow(sheet->R.R(), static_cast<unsigned long>(generation)));
}

RationalInterval CantorState::cell(long generation, const Integer& index) const {
  Rational L = cell_length(generation);
  Rational left = sheet->I0.left + L * Rational(index);
  return RationalInterval(left, left + L);
}

CantorState make_state(const CurveModel& curve, const ShiftField& shift, const ConstantSheet& sheet,
                       MeasureOracle measure, EngineOptions options) {
  if (sheet.R.test_mode()) throw Error(ErrorCode::ConfigError, "the Cantor engine needs an integer R");
  if (options.beam == 0) throw std::invalid_argument("beam must be positive");
  CantorState st;
  st.curve = &curve;
  st.shift = &shift;
  st.sheet = &sheet;
  st.measure = std::move(measure);
  st.options = std::move(options);
  st.alive = {Integer(0)};
  st.reserve.resize(1);
  return st;
}

const std::vector<DangerousWindow>& level_windows(CantorState& st, long level) {
  auto it = st.window_cache.find(level);
  if (it != st.window_cache.end()) return it->second;
  std::vector<DangerousWindow> w;
  if (level >= 1) w = enumerate_level(level, *st.curve, *st.shift, *st.sheet, st.sheet->I0);
  return st.window_cache.emplace(level, std::move(w)).first->second;
}

namespace {

template <class T>
void grow(std::vector<T>& v, std::size_t n) {
  if (v.size() < n) v.resize(n);
}

long max_count(const std::map<Integer, long>& m) {
  long best = 0;
  for (const auto& [k, v] : m) best = std::max(best, v);
  return best;
}

long max_j_per_v(const std::vector<DangerousWindow>& windows) {
  std::map<std::pair<long, std::vector<Integer>>, std::set<Integer>> js;
  for (const auto& w : windows) js[{w.m, w.p}].insert(w.j);
  long best = 0;
  for (const auto& [v, s] : js) best = std::max(best, static_cast<long>(s.size()));
  return best;
}

struct Verdict {
  bool removed = false;
  RemovalCause cause = RemovalCause::Measure;
  long p = 0;
};

void refresh_row(CantorState& st, long q) {
  LedgerRow& row = st.rows[static_cast<std::size_t>(q)];
  row.q = q;
  const std::size_t k = static_cast<std::size_t>(q) + 1;
  row.h_prime.assign(k, 0);
  row.h_measure.assign(k, 0);
  row.h_lattice.assign(k, 0);
  row.f.assign(k, 0);
  for (std::size_t p = 0; p < k; ++p) {
    row.h_prime[p] = max_count(st.hp_counts[q][p]);
    row.h_measure[p] = max_count(st.hm_counts[q][p]);
    row.h_lattice[p] = max_count(st.hl_counts[q][p]);
    row.f[p] = max_count(st.f_counts[q][p]);
  }
  long dv = 0;
  for (const auto& [g, s] : st.v_sets[q]) dv = std::max(dv, static_cast<long>(s.size()));
  row.max_distinct_v = dv;
}

void expect(CantorState& st, bool ok, const std::string& what) {
  if (!ok) st.expectation_failures.push_back(what);
}

// One generation from st.q with the current beam; survivors beyond the beam go to the reserve.
void step(CantorState& st) {
  const long q = st.q;
  const Integer& R = st.sheet->R.R();
  const unsigned long Ru = to_ulong_checked(R);
  const std::size_t k = static_cast<std::size_t>(q) + 1;
  for (auto* v : {&st.hp_counts, &st.hm_counts, &st.hl_counts, &st.f_counts}) {
    grow(*v, k);
    grow((*v)[q], k);
  }
  grow(st.v_sets, k);
  grow(st.rows, k);
  grow(st.reserve, k + 1);

  std::vector<Integer> children;
  children.reserve(st.alive.size() * Ru);
  for (const auto& a : st.alive)
    for (unsigned long c = 0; c < Ru; ++c) children.push_back(a * R + c);
  std::vector<RationalInterval> cells;
  cells.reserve(children.size());
  for (const auto& c : children) cells.push_back(st.cell(q + 1, c));
  std::vector<Verdict> verdict(children.size());

  // (i) measure-deficient cells, class q.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (st.measure.deficient(cells[i])) {
      verdict[i] = {true, RemovalCause::Measure, q};
      expect(st, st.measure.kind != MeasureOracle::Kind::Lebesgue,
             "q=" + std::to_string(q) + ": Lebesgue cell reported measure-deficient");
    }
  }

  // (iii) dangerous hits from level-q windows, class q-1.
  LedgerRow& row = st.rows[static_cast<std::size_t>(q)];
  const auto& windows = level_windows(st, q);
  row.windows = static_cast<long>(windows.size());
  if (!windows.empty()) {
    row.max_j_per_v = max_j_per_v(windows);
    expect(st, row.max_j_per_v <= 2, "q=" + std::to_string(q) + ": more than two j for one v");
    HitReport hits = mark_hits(windows, cells);
    const Integer R2 = R * R;
    for (std::size_t w = 0; w < windows.size(); ++w) {
      if (hits.hit_cells[w].empty()) continue;
      ++row.windows_hitting;
      for (std::size_t i : hits.hit_cells[w]) {
        st.v_sets[q][Integer(children[i] / R2)].insert({windows[w].m, windows[w].p});
      }
    }
    for (std::size_t i : hits.marked) {
      st.f_counts[q][q - 1][Integer(children[i] / R2)] += 1;
      if (!verdict[i].removed) verdict[i] = {true, RemovalCause::DangerousHit, q - 1};
    }
  }

  // (ii) lattice escapes.
  auto schedule = escape_schedule(q);
  if (st.options.escape_tests && !schedule.empty()) {
    parallel_for(children.size(), [&](std::size_t i) {
      if (verdict[i].removed) return;
      for (const auto& e : schedule) {
        if (escape_witness(*st.curve, cells[i], e.l, q, *st.sheet, st.options.escape_samples)) {
          verdict[i] = {true, RemovalCause::LatticeEscape, e.p};
          return;
        }
      }
    });
  }

  // Ledgers, applied in cell order.
  std::vector<Integer> survivors;
  for (std::size_t i = 0; i < children.size(); ++i) {
    const Verdict& v = verdict[i];
    if (!v.removed) {
      survivors.push_back(children[i]);
      continue;
    }
    Integer anc = children[i] / ipow(R, static_cast<unsigned long>(q + 1 - v.p));
    st.hp_counts[q][v.p][anc] += 1;
    switch (v.cause) {
      case RemovalCause::Measure: st.hm_counts[q][v.p][anc] += 1; ++row.removed_measure; break;
      case RemovalCause::LatticeEscape: st.hl_counts[q][v.p][anc] += 1; ++row.removed_lattice; break;
      case RemovalCause::DangerousHit: ++row.removed_dangerous; break;
    }
    if (st.options.sink) st.options.sink(RemovalRecord{q + 1, children[i], v.cause, v.p});
  }
  row.parents += static_cast<long>(st.alive.size());
  row.children += static_cast<long>(children.size());
  refresh_row(st, q);

  const std::string at = "q=" + std::to_string(q) + ": ";
  expect(st, row.f[static_cast<std::size_t>(q)] == 0, at + "f_{q,q} != 0");
  for (std::size_t p = 0; p < k; ++p) {
    expect(st, row.f[p] <= 6, at + "f_{" + std::to_string(p) + ",q} > 6");
    expect(st, row.h_prime[p] <= row.h_measure[p] + row.h_lattice[p] + row.f[p], at + "h' > h + f");
  }
  expect(st, row.max_distinct_v <= 1, at + "two distinct v hit one interval of the previous generation");

  st.q = q + 1;
  std::size_t keep = std::min(st.options.beam, survivors.size());
  st.alive.assign(survivors.begin(), survivors.begin() + static_cast<long>(keep));
  auto& res = st.reserve[static_cast<std::size_t>(q + 1)];
  for (std::size_t i = keep; i < survivors.size(); ++i) res.push_back(survivors[i]);
}

}  // namespace

void advance(CantorState& st) {
  const long goal = st.q + 1;
  while (st.q < goal) {
    step(st);
    if (!st.alive.empty()) continue;
    long g = st.q;
    while (g >= 0 && st.reserve[static_cast<std::size_t>(g)].empty()) --g;
    if (g < 0) throw Error(ErrorCode::Extinct, "no alive intervals at generation " + std::to_string(st.q));
    auto& res = st.reserve[static_cast<std::size_t>(g)];
    std::size_t take = std::min(st.options.beam, res.size());
    st.alive.assign(res.begin(), res.begin() + static_cast<long>(take));
    res.erase(res.begin(), res.begin() + static_cast<long>(take));
    std::sort(st.alive.begin(), st.alive.end());
    st.q = g;
    ++st.backtracks;
  }
}

void run_to(CantorState& st, long q_max) {
  while (st.q < q_max) advance(st);
}

SurvivorReport survivor_counts(const std::vector<std::vector<long>>& h, const Integer& R, const Rational& C,
                               const Rational& alpha) {
  SurvivorReport rep;
  const Rational floor_scale = 36 * C * C;
  std::vector<Rational> t;
  for (std::size_t q = 0; q < h.size(); ++q) {
    if (!rep.positive) {
      rep.t.push_back(std::nullopt);
      continue;
    }
    Rational tq = Rational(R) - h[q][q];
    Rational prod = 1;
    for (std::size_t j = 1; j <= q; ++j) {
      prod *= t[q - j];
      tq -= Rational(h[q][q - j]) / prod;
    }
    t.push_back(tq);
    rep.t.push_back(tq);
    if (tq <= 0) {
      rep.positive = false;
      rep.meets_floor = false;
    } else if (compare_powers(floor_scale * tq, Rational(1), Rational(R), alpha) < 0) {
      rep.meets_floor = false;
    }
  }
  return rep;
}

SurvivorReport survivor_counts(const CantorState& st) {
  std::vector<std::vector<long>> h;
  for (const auto& row : st.rows) h.push_back(row.h_prime);
  return survivor_counts(h, st.sheet->R.R(), st.sheet->C, st.sheet->alpha);
}

Extraction extract_point(const CantorState& st) {
  if (st.alive.empty()) throw Error(ErrorCode::Extinct, "no alive interval to extract");
  Extraction ex;
  const Integer& R = st.sheet->R.R();
  const Integer& leaf = st.alive.front();
  for (long g = 0; g <= st.q; ++g) {
    Integer idx = leaf / ipow(R, static_cast<unsigned long>(st.q - g));
    ex.chain.push_back(st.cell(g, idx));
  }
  ex.x_star = ex.chain.back().midpoint();
  return ex;
}

long covered_m_bound(const ConstantSheet& sheet, long q_max) { return level_band(q_max - 1, sheet).second; }

Certificate emit_certificate(const CantorState& st, const ConstantSheet& sheet, const CurveModel& curve,
                             const ShiftField& shift) {
  Extraction ex = extract_point(st);
  Certificate cert;
  cert.sheet = sheet;
  cert.curve = curve.components;
  cert.shift = shift.components;
  cert.domain = curve.domain;
  cert.q_max = st.q;
  cert.chain = ex.chain;
  cert.x_star = ex.x_star;
  cert.M_max = covered_m_bound(sheet, st.q);
  cert.m_floor = m_threshold(sheet);
  cert.floor_base = sheet.c / 4;
  cert.floor_exp = 1 / sheet.weights.rn();
  cert.floor_decimal = pow(Enclosure(cert.floor_base, sheet.precision), cert.floor_exp).decimal(40);
  cert.ledger = st.rows;
  SurvivorReport sr = survivor_counts(st);
  cert.t = sr.t;
  cert.status = std::string(sr.positive ? kCountingMet : kCountingNotMet);
  cert.expectation_failures = static_cast<long>(st.expectation_failures.size());
  return cert;
}

}  // namespace badcantor
