#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "badcantor/constants.hpp"
#include "badcantor/core.hpp"
#include "badcantor/dangerous.hpp"

namespace badcantor {

enum class RemovalCause { Measure, LatticeEscape, DangerousHit };
std::string_view removal_cause_name(RemovalCause c);

struct RemovalRecord {
  long generation = 0;  // generation of the removed cell
  Integer index;        // position in the generation grid
  RemovalCause cause = RemovalCause::Measure;
  long p = 0;           // class the removal is ledgered under
};

/// One scheduled escape test: class p, flow depth l.
struct EscapeClass {
  long p = 0;
  long l = 0;
};

/// Escape classes tested at step q, in removal priority order (first match wins).
std::vector<EscapeClass> escape_schedule(long q);

struct EngineOptions {
  std::size_t beam = 256;  // parents expanded per generation before falling back to the reserve
  int escape_samples = 9;
  bool escape_tests = true;
  std::function<void(const RemovalRecord&)> sink;
};

/// Ledger row for step q (children in generation q+1). Vectors are indexed by p = 0..q.
struct LedgerRow {
  long q = 0;
  std::vector<long> h_prime;
  std::vector<long> h_measure;
  std::vector<long> h_lattice;
  std::vector<long> f;
  long parents = 0;
  long children = 0;
  long removed_measure = 0;
  long removed_lattice = 0;
  long removed_dangerous = 0;
  long windows = 0;
  long windows_hitting = 0;
  long max_distinct_v = 0;
  long max_j_per_v = 0;
};

struct CantorState {
  const CurveModel* curve = nullptr;
  const ShiftField* shift = nullptr;
  const ConstantSheet* sheet = nullptr;
  MeasureOracle measure;
  EngineOptions options;

  long q = 0;
  std::vector<Integer> alive;                  // grid indices at generation q, ascending
  std::vector<std::deque<Integer>> reserve;    // per generation, alive but not yet expanded
  std::vector<LedgerRow> rows;
  std::vector<std::string> expectation_failures;
  long backtracks = 0;

  // Per (q, p): ancestor index at generation p -> count.
  std::vector<std::vector<std::map<Integer, long>>> hp_counts, hm_counts, hl_counts, f_counts;
  // Per q: grandparent index -> distinct (m, p) among hitting windows.
  std::vector<std::map<Integer, std::set<std::pair<long, std::vector<Integer>>>>> v_sets;
  std::map<long, std::vector<DangerousWindow>> window_cache;

  Rational cell_length(long generation) const;
  RationalInterval cell(long generation, const Integer& index) const;
};

CantorState make_state(const CurveModel& curve, const ShiftField& shift, const ConstantSheet& sheet,
                       MeasureOracle measure = MeasureOracle::lebesgue(), EngineOptions options = {});

/// One generation: partition, remove measure / lattice-escape / dangerous-hit cells, update ledgers.
/// Backtracks into the reserve when the expanded beam dies out.
void advance(CantorState& state);

/// advance until generation q_max.
void run_to(CantorState& state, long q_max);

/// Windows of the given level, enumerated once per state.
const std::vector<DangerousWindow>& level_windows(CantorState& state, long level);

struct SurvivorReport {
  std::vector<std::optional<Rational>> t;  // nullopt once an earlier t' is not positive
  bool positive = true;
  bool meets_floor = true;
};

/// t'_q from h'_{p,q}: t_0 = R - h_{0,0}, t_q = R - h_{q,q} - sum_j h_{q-j,q} / prod_{i<=j} t_{q-i}.
SurvivorReport survivor_counts(const std::vector<std::vector<long>>& h, const Integer& R, const Rational& C = 1,
                               const Rational& alpha = 1);
SurvivorReport survivor_counts(const CantorState& state);

struct Extraction {
  Rational x_star;
  std::vector<RationalInterval> chain;
};

/// Leftmost alive interval at the final generation with its ancestors.
Extraction extract_point(const CantorState& state);

inline constexpr std::string_view kCountingMet = "counting criterion met";
inline constexpr std::string_view kCountingNotMet = "counting criterion not met - survivor exhibited constructively";

struct Certificate {
  std::string version = "badcantor-certificate 1";
  std::string config_hash;
  ConstantSheet sheet;
  std::vector<Polynomial> curve;
  std::vector<Polynomial> shift;
  RationalInterval domain;
  long q_max = 0;
  std::vector<RationalInterval> chain;
  Rational x_star;
  long M_max = 0;
  Rational m_floor;      // banded m satisfy m > m_floor
  Rational floor_base;   // c/4
  Rational floor_exp;    // 1/r_n
  std::string floor_decimal;
  std::vector<LedgerRow> ledger;
  std::vector<std::optional<Rational>> t;
  std::string status;
  long expectation_failures = 0;
  std::optional<std::string> report;  // rendered oracle report section
};

Certificate emit_certificate(const CantorState& state, const ConstantSheet& sheet, const CurveModel& curve,
                             const ShiftField& shift);

/// Largest m with m^{1+r_1} < 2c|I0|^{-1} R^{q_max+1}.
long covered_m_bound(const ConstantSheet& sheet, long q_max);

}  // namespace badcantor
