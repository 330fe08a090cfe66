#pragma once

#include <string>
#include <vector>

#include "badcantor/core.hpp"
#include "badcantor/enclosure.hpp"
#include "badcantor/scale.hpp"

namespace badcantor {

struct Exponents {
  Rational beta_units;        // beta = beta_units * ln R
  Rational beta_prime_units;  // beta' = beta_prime_units * ln R
  Rational epsilon;
  Enclosure beta;
  Enclosure beta_prime;
};

/// beta = ln R/(1+r_1), beta' = ln R/(1+1/n), epsilon = r_n/(8n).
Exponents derive_exponents(const ScaleBase& R, const Weight& r, std::size_t n, mpfr_prec_t prec = kDefaultPrecision);

struct ConstantSheet {
  ScaleBase R;
  Weight weights;
  std::size_t n = 0;
  Rational beta_units;
  Rational beta_prime_units;
  Rational epsilon;
  Enclosure beta;
  Enclosure beta_prime;
  Enclosure xi;
  long lambda1 = 0;
  Enclosure k1;
  Rational f0{1};
  std::vector<Rational> d;
  Enclosure c_formula;
  Rational c;  // rational lower bound of c_formula
  Rational C{1};
  Rational alpha{1};
  RationalInterval I0;
  mpfr_prec_t precision = kDefaultPrecision;
  long xi_depth = 0;
  int xi_samples = 0;

  Rational d1() const { return d.front(); }
  /// max_{i >= 2} d_i, 0 for n = 1.
  Rational d_tail_max() const;
};

/// Fixed fractional offset of the xi sample grid.
Rational xi_sample_offset();
std::vector<Rational> xi_sample_points(const RationalInterval& I0, int samples);

/// min over sample x and t in {1/8, ..., q_max} of the shortest vector of a(beta t) u(phi(x)) Z^{n+1},
/// capped below (n+1)/e.
Enclosure estimate_xi(const CurveModel& curve, const Weight& r, const ScaleBase& R, const RationalInterval& I0,
                      long q_max, int samples, mpfr_prec_t prec = kDefaultPrecision);

/// Fills lambda1, k1, c_formula and c from xi, beta, f0, d (no admissibility checks).
void compute_small_constants(ConstantSheet& sheet);

/// compute_small_constants plus the admissibility checks; RInadmissible names the failing inequality.
ConstantSheet derive_small_constants(ConstantSheet sheet);

struct ConstantInputs {
  const CurveModel* curve = nullptr;
  const ShiftField* shift = nullptr;
  Weight weights;
  ScaleBase R;
  RationalInterval I0;
  MeasureOracle measure;
  long xi_depth = 1;
  int xi_samples = 9;
  mpfr_prec_t precision = kDefaultPrecision;
};

/// Full derivation; precision doubles (at most four times) when a ceiling or comparison is undecided.
ConstantSheet derive_constants(const ConstantInputs& in);

}  // namespace badcantor
