#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "badcantor/cantor.hpp"
#include "badcantor/core.hpp"
#include "badcantor/lattice.hpp"

namespace badcantor {

/// factor * base^exponent with factor, base >= 0 and exponent > 0.
struct PowerValue {
  Rational factor{1};
  Rational base{0};
  Rational exponent{1};

  bool is_zero() const { return factor == 0 || base == 0; }
  std::string decimal(int digits = 20) const;
  bool operator==(const PowerValue& o) const = default;
};

/// Exact sign of a - b.
int compare(const PowerValue& a, const PowerValue& b);

struct Quality {
  PowerValue value;
  std::size_t worst_i = 0;      // component attaining the max
  std::vector<Integer> p;       // nearest integers of m phi_i(x) - theta_i(x)
};

/// max_i |m phi_i(x) - theta_i(x)|_Z^{1/r_i} |m|.
Quality quality(const CurveModel& curve, const ShiftField& shift, const Weight& r, const Rational& x,
                const Integer& m);

struct Estimate {
  PowerValue value;
  Integer argmin;
};

/// min over M0 < |m| <= Q of quality(x, m).
Estimate bad_constant_estimate(const CurveModel& curve, const ShiftField& shift, const Weight& r, const Rational& x,
                               long Q, long M0 = 0);

/// Partial quotients of a rational x (finite expansion).
std::vector<Integer> continued_fraction(const Rational& x);

/// min of q_k |q_k x - p_k| over convergent denominators M0 < q_k <= Q, from the expansion of x.
std::optional<Rational> convergent_quality_min(const Rational& x, long Q, long M0 = 0);

/// Rational within 2^-bits of sqrt(k).
Rational sqrt_approximation(unsigned long k, unsigned bits);
/// Rational within 2^-bits of (1 + sqrt 5)/2.
Rational golden_ratio_approximation(unsigned bits);

struct QualityRow {
  long m = 0;
  std::size_t worst_i = 0;
  std::vector<Integer> p;
  PowerValue value;
  bool pass = true;
};

struct QualityReport {
  Rational x;
  Rational m_floor;
  long M_max = 0;
  PowerValue floor;
  std::vector<QualityRow> rows;
  long worst_m = 0;
  std::size_t worst_i = 0;
  PowerValue worst_value;
  std::vector<std::string> defects;  // point-level defects, each forcing verdict fail
  bool pass = true;

  std::vector<long> failing_m() const;
};

/// Checks quality(x*, m) >= (c/4)^{1/r_n} for every m_floor < m <= M_max, after checking the chain.
/// Structural defects throw CertificateBroken; x* outside the chain and failing m give verdict fail.
QualityReport verify_certificate(const Certificate& cert, const CurveModel& curve, const ShiftField& shift);

/// [report] section body.
std::string render_report(const QualityReport& report);

struct TransferInstance {
  std::size_t n = 1;
  RationalMatrix L;           // row i: coefficients of L_i
  std::vector<Rational> T;    // T_0..T_n
};

struct TransferReport {
  std::vector<Integer> u;
  std::vector<Integer> v;
  Rational determinant;
  Rational iota_pow_n;        // prod T / |d|
  RationalMatrix dual;        // row i: coefficients of L'_i
  bool identity_holds = false;
};

/// Transposed system with sum L_i L'_i = sum u_i v_i.
RationalMatrix transposed_system(const RationalMatrix& L);

/// Random system with entries in [-3,3] (step 1/2) and bounds met by a planted u in [-3,3]^{n+1}.
TransferInstance planted_transfer_instance(std::mt19937_64& rng, std::size_t n);

/// Finds u in [-B,B]^{n+1} for the primal system, then v for the transposed system by enumerating dual_box.
TransferReport transference_check(const TransferInstance& inst, long B);

/// Provable per-coordinate box containing every v satisfying the dual bounds.
std::vector<Integer> dual_box(const TransferInstance& inst);

/// Fewest survivors after h.size() generations over every removal placement the ledger h[q][p] permits
/// (at most h[q][p] removals of generation-(q+1) cells inside each generation-p interval). nullopt if the
/// search outgrows `budget` states.
std::optional<long> min_survivors_exhaustive(unsigned R, const std::vector<std::vector<long>>& h,
                                             std::size_t budget = 20000);

/// prod t'_q when every t'_q > 0, else 0.
Rational recursion_survivor_bound(unsigned R, const std::vector<std::vector<long>>& h);

}  // namespace badcantor
