#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "badcantor/errors.hpp"
#include "badcantor/polynomial.hpp"
#include "badcantor/rational.hpp"

namespace badcantor {

/// Closed interval with exact endpoints.
struct RationalInterval {
  Rational left;
  Rational right;

  RationalInterval() = default;
  RationalInterval(Rational l, Rational r);

  Rational length() const { return right - left; }
  Rational midpoint() const { return (left + right) / 2; }
  bool contains(const Rational& x) const { return left <= x && x <= right; }
  bool contains(const RationalInterval& o) const { return left <= o.left && o.right <= right; }
  /// Closed intersection is nonempty.
  bool meets(const RationalInterval& o) const { return left <= o.right && o.left <= right; }
  std::optional<RationalInterval> intersect(const RationalInterval& o) const;
  /// k-fold dilation about the midpoint.
  RationalInterval dilate(const Rational& k) const;
  /// Distance from x to the interval (0 inside).
  Rational distance(const Rational& x) const;

  bool operator==(const RationalInterval& o) const { return left == o.left && right == o.right; }
  bool operator<(const RationalInterval& o) const {
    return left < o.left || (left == o.left && right < o.right);
  }

  std::string serialize() const;
};

class Weight {
 public:
  Weight() = default;
  std::size_t dim() const { return entries_.size(); }
  const Rational& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<Rational>& entries() const { return entries_; }
  const Rational& r1() const { return entries_.front(); }
  const Rational& rn() const { return entries_.back(); }

 private:
  friend Weight validate_weights(const std::vector<Rational>& raw);
  std::vector<Rational> entries_;
};

/// Sorted descending; rejects zero, negative, empty or non-unit-sum input.
Weight validate_weights(const std::vector<Rational>& raw);

struct CurveModel {
  std::vector<Polynomial> components;
  RationalInterval domain;  // open interval (left, right)

  std::size_t dim() const { return components.size(); }
  Rational value(std::size_t i, const Rational& x) const { return components[i](x); }
  /// f0 = 1 + sup_i sup_{x in region} |phi_i'(x)|, as a rational upper bound.
  Rational derivative_envelope(const RationalInterval& region) const;
};

CurveModel build_curve(std::vector<Polynomial> components, RationalInterval domain);

struct ShiftField {
  std::vector<Polynomial> components;
  std::vector<Rational> lipschitz;  // d_1..d_n, each >= 1/1000
  RationalInterval region;          // where the Lipschitz bounds hold

  std::size_t dim() const { return components.size(); }
  Rational value(std::size_t i, const Rational& x) const { return components[i](x); }
};

inline const Rational kLipschitzFloor{1, 1000};

/// d_i = max(sup |theta_i'| bound on region, 1/1000).
ShiftField build_shift(std::vector<Polynomial> components, const RationalInterval& region);

struct MeasureOracle {
  enum class Kind { Lebesgue, External };
  Kind kind = Kind::Lebesgue;
  Rational C{1};
  Rational alpha{1};
  Rational rho0{1};
  std::function<Rational(const RationalInterval&)> hook;

  static MeasureOracle lebesgue(Rational rho0 = Rational(1));
  Rational measure(const RationalInterval& I) const;
  /// mu(I) < (3C)^{-1} |I|^alpha.
  bool deficient(const RationalInterval& I) const;
};

/// I0 about `center` (default: midpoint of U) with 3^{n+1} I0 inside U, 3|I0| <= min(rho0, 1), R > 1/|I0|.
RationalInterval select_base_interval(const CurveModel& curve, const Integer& R, const MeasureOracle& measure,
                                      std::optional<Rational> center = std::nullopt);

std::vector<RationalInterval> partition(const RationalInterval& I, unsigned long R);

Integer pow3(std::size_t e);

}  // namespace badcantor
