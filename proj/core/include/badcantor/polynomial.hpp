#pragma once

#include <string>
#include <vector>

#include "badcantor/enclosure.hpp"
#include "badcantor/rational.hpp"

namespace badcantor {

struct RationalInterval;

/// Univariate polynomial with rational coefficients, ascending powers.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs);
  static Polynomial constant(const Rational& c);
  static Polynomial identity();
  static Polynomial monomial(unsigned degree);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Rational(0); }

  Rational operator()(const Rational& x) const;
  Enclosure operator()(const Enclosure& x) const;
  Polynomial derivative() const;

  /// Upper bound of sup |P| on the closed interval, from the Taylor expansion at the midpoint.
  Rational sup_abs_bound(const RationalInterval& I) const;

  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

  /// Coefficients as space-separated "num/den" tokens ("0/1" for the zero polynomial).
  std::string serialize() const;
  static Polynomial parse(const std::string& text);
  /// Human-readable form such as "1/3 + 1/11*x".
  std::string pretty() const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

}  // namespace badcantor
