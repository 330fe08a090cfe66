#pragma once

#include <random>
#include <string>
#include <vector>

#include "badcantor/constants.hpp"
#include "badcantor/core.hpp"

namespace badcantor::testing {

inline Rational Q(long num, long den = 1) { return make_rational(num, den); }

inline CurveModel parabola() {
  return build_curve({Polynomial::identity(), Polynomial::monomial(2)}, RationalInterval(-1, 1));
}

inline CurveModel line() { return build_curve({Polynomial::identity()}, RationalInterval(-1, 1)); }

inline Polynomial affine(const Rational& a, const Rational& b) { return Polynomial({a, b}); }

inline Weight weights(std::vector<Rational> r) { return validate_weights(r); }

/// Sheet with a hand-picked c, for geometry that the derived constants make too sparse to see.
inline ConstantSheet synthetic_sheet(const CurveModel& curve, const ShiftField& shift, const Weight& r, long R,
                                     const RationalInterval& I0, const Rational& c) {
  ConstantSheet s;
  s.R = ScaleBase::integer(R);
  s.weights = r;
  s.n = curve.dim();
  s.I0 = I0;
  s.c = c;
  s.d = shift.lipschitz;
  s.f0 = curve.derivative_envelope(I0.dilate(Rational(pow3(curve.dim() + 1))));
  return s;
}

/// Uniform dyadic rational in [lo, hi].
inline Rational uniform(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  Integer k(static_cast<unsigned long>(rng() >> 12));
  return lo + (hi - lo) * make_rational(k, Integer(1) << 52);
}

inline std::string source_dir() { return BADCANTOR_SOURCE_DIR; }

}  // namespace badcantor::testing
