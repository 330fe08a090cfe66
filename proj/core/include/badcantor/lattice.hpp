#pragma once

#include <optional>
#include <string>
#include <vector>

#include "badcantor/core.hpp"
#include "badcantor/enclosure.hpp"
#include "badcantor/scale.hpp"

namespace badcantor {

struct ConstantSheet;

using RationalMatrix = std::vector<std::vector<Rational>>;

RationalMatrix identity_matrix(std::size_t k);
RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix transpose(const RationalMatrix& a);
Rational determinant(RationalMatrix a);
/// Throws DimensionMismatch when singular.
RationalMatrix inverse(const RationalMatrix& a);

enum class FlowKind { A, B, U, U1, Z, Product };
std::string_view flow_kind_name(FlowKind k);

/// The matrix diag(R^{log_diag_i}) * shear, with R taken from `base`.
struct FlowMatrix {
  FlowKind kind = FlowKind::Product;
  ScaleBase base;
  std::vector<Rational> log_diag;
  RationalMatrix shear;

  std::size_t dim() const { return log_diag.size(); }
  std::vector<std::vector<Enclosure>> entries(mpfr_prec_t prec = kDefaultPrecision) const;
  Enclosure determinant(mpfr_prec_t prec = kDefaultPrecision) const;
  /// det = 1 decided exactly: sum of log_diag is 0 and det(shear) = 1.
  bool exactly_unimodular() const;
};

/// Supported when the left factor is diagonal or the right factor has no diagonal part.
FlowMatrix operator*(const FlowMatrix& lhs, const FlowMatrix& rhs);

/// a(s ln R) = diag(R^s, R^{-r_1 s}, ..., R^{-r_n s}).
FlowMatrix flow_a(const Weight& r, const Rational& s, const ScaleBase& base);
/// b(s ln R) = diag(R^{-s/n}, R^{s}, R^{-s/n}, ...).
FlowMatrix flow_b(std::size_t n, const Rational& s, const ScaleBase& base);
FlowMatrix flow_u(const std::vector<Rational>& x);
FlowMatrix flow_u1(const std::vector<Rational>& y);
/// z(x) = u1(phi_2'(x), ..., phi_n'(x)).
FlowMatrix flow_z(const CurveModel& curve, const Rational& x);

struct DaniParams {
  std::size_t n = 0;
  ScaleBase base;
  Rational s;                       // time in units of ln R (a, b)
  std::optional<Weight> weights;    // a
  std::vector<Rational> vec;        // u: length n, u1: length n-1
  const CurveModel* curve = nullptr;  // z
  Rational x;                       // z
};

FlowMatrix dani_matrix(FlowKind kind, const DaniParams& p);

struct LatticeBasis {
  FlowMatrix g;
  std::string provenance;
};

struct ShortestVector {
  std::vector<Integer> coeffs;
  Enclosure norm;
};

ShortestVector shortest_nonzero(const LatticeBasis& basis, mpfr_prec_t prec = kDefaultPrecision);

/// coeff * R^{log_exponent}.
struct Threshold {
  Rational coeff{1};
  Rational log_exponent{0};
  Enclosure value(const ScaleBase& base, mpfr_prec_t prec) const;
};

/// shortest norm >= eps; precision doubles up to 512 bits before Undecidable.
bool in_compact(const LatticeBasis& basis, const Threshold& eps, mpfr_prec_t start = kDefaultPrecision);
bool in_compact(const LatticeBasis& basis, const Rational& eps, mpfr_prec_t start = kDefaultPrecision);

/// b(beta' l) a(beta (q+1)) z(x) u(phi(x)).
LatticeBasis escape_lattice(const CurveModel& curve, const Weight& r, const ScaleBase& base, const Rational& x,
                            long l, long q);
/// e^{-eps beta l} as a power of R.
Threshold escape_threshold(const Weight& r, const Rational& epsilon, long l);

bool escape_witness(const CurveModel& curve, const RationalInterval& I, long l, long q, const ConstantSheet& sheet,
                    int samples);

/// a(beta t) u(phi(x)), with beta t = t ln R / (1 + r_1).
LatticeBasis orbit_lattice(const CurveModel& curve, const Weight& r, const ScaleBase& base, const Rational& x,
                           const Rational& t);

}  // namespace badcantor
