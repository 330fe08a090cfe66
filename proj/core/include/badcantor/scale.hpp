#pragma once

#include <optional>
#include <string>

#include "badcantor/enclosure.hpp"
#include "badcantor/rational.hpp"

namespace badcantor {

/// The partition arity R, or (test mode only) a real R = e^k given through its logarithm.
class ScaleBase {
 public:
  ScaleBase() : R_(2) {}
  static ScaleBase integer(Integer R);
  static ScaleBase exp_of(Rational log_value);

  bool test_mode() const { return log_value_.has_value(); }
  /// Integer R; throws in test mode.
  const Integer& R() const;
  Enclosure ln(mpfr_prec_t prec) const;
  /// R^e as an enclosure.
  Enclosure power(const Rational& e, mpfr_prec_t prec) const;
  /// Sign of R^e - x, exact for integer R; nullopt if undecidable in test mode at this precision.
  std::optional<int> compare_power(const Rational& e, const Rational& x, mpfr_prec_t prec) const;
  std::string describe() const;
  long double ln_approx() const;

  bool operator==(const ScaleBase& o) const { return R_ == o.R_ && log_value_ == o.log_value_; }

 private:
  Integer R_;
  std::optional<Rational> log_value_;
};

}  // namespace badcantor
