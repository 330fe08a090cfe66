#include "badcantor/scale.hpp"

#include <cmath>

#include "badcantor/errors.hpp"

namespace badcantor {

ScaleBase ScaleBase::integer(Integer R) {
  if (R < 2) throw Error(ErrorCode::RInadmissible, "R must be an integer >= 2, got " + R.get_str());
  ScaleBase s;
  s.R_ = std::move(R);
  return s;
}

ScaleBase ScaleBase::exp_of(Rational log_value) {
  if (log_value <= 0) throw Error(ErrorCode::RInadmissible, "test-mode R needs ln R > 0");
  ScaleBase s;
  s.R_ = 0;
  s.log_value_ = std::move(log_value);
  return s;
}

const Integer& ScaleBase::R() const {
  if (test_mode()) throw Error(ErrorCode::RInadmissible, "integer R requested from a test-mode real R");
  return R_;
}

Enclosure ScaleBase::ln(mpfr_prec_t prec) const {
  if (log_value_) return Enclosure(*log_value_, prec);
  return ln_of(Rational(R_), prec);
}

Enclosure ScaleBase::power(const Rational& e, mpfr_prec_t prec) const {
  if (!log_value_ && e.get_den() == 1) return Enclosure(ipow_signed(Rational(R_), to_long_checked(e.get_num())), prec);
  return exp(Enclosure(e, prec) * ln(prec));
}

std::optional<int> ScaleBase::compare_power(const Rational& e, const Rational& x, mpfr_prec_t prec) const {
  if (!log_value_) {
    if (x <= 0) return 1;
    return compare_powers(Rational(R_), e, x, Rational(1));
  }
  auto c = power(e, prec).compare(x);
  if (!c) return std::nullopt;
  return *c;
}

std::string ScaleBase::describe() const {
  if (log_value_) return "exp(" + to_string(*log_value_) + ")";
  return R_.get_str();
}

long double ScaleBase::ln_approx() const {
  if (log_value_) return static_cast<long double>(log_value_->get_d());
  long exp2 = 0;
  double mant = mpz_get_d_2exp(&exp2, R_.get_mpz_t());
  return std::log(static_cast<long double>(mant)) + static_cast<long double>(exp2) * std::log(2.0L);
}

}  // namespace badcantor
