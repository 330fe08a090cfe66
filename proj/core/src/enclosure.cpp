#include "badcantor/enclosure.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace badcantor {

Enclosure::Enclosure(mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Enclosure::Enclosure(const Rational& x, mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_q(lo_, x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, x.get_mpq_t(), MPFR_RNDU);
}

Enclosure::Enclosure(long x, mpfr_prec_t prec) : prec_(prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_si(lo_, x, MPFR_RNDD);
  mpfr_set_si(hi_, x, MPFR_RNDU);
}

Enclosure::Enclosure(const Enclosure& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Enclosure::Enclosure(Enclosure&& other) noexcept : Enclosure(other.prec_) {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Enclosure& Enclosure::operator=(const Enclosure& other) {
  if (this == &other) return *this;
  if (prec_ != other.prec_) {
    prec_ = other.prec_;
    mpfr_set_prec(lo_, prec_);
    mpfr_set_prec(hi_, prec_);
  }
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

Enclosure& Enclosure::operator=(Enclosure&& other) noexcept {
  std::swap(prec_, other.prec_);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Enclosure::~Enclosure() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Enclosure Enclosure::hull(const Rational& a, const Rational& b, mpfr_prec_t prec) {
  Enclosure r(prec);
  const Rational& l = a < b ? a : b;
  const Rational& h = a < b ? b : a;
  mpfr_set_q(r.lo_, l.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, h.get_mpq_t(), MPFR_RNDU);
  return r;
}

Enclosure Enclosure::operator-() const {
  Enclosure r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

static mpfr_prec_t common(const Enclosure& a, const Enclosure& b) {
  return std::max(a.precision(), b.precision());
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  Enclosure r(common(a, b));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  Enclosure r(common(a, b));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  return r;
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  mpfr_prec_t p = common(a, b);
  Enclosure r(p);
  if (mpfr_sgn(a.lo_) >= 0 && mpfr_sgn(b.lo_) >= 0) {
    mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }
  mpfr_srcptr al[2] = {a.lo_, a.hi_};
  mpfr_srcptr bl[2] = {b.lo_, b.hi_};
  mpfr_t t;
  mpfr_init2(t, p);
  bool first = true;
  for (auto x : al) {
    for (auto y : bl) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_less_p(t, r.lo_)) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_greater_p(t, r.hi_)) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  return r;
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) {
    throw std::domain_error("Enclosure: division by an interval containing zero");
  }
  mpfr_prec_t p = common(a, b);
  Enclosure inv(p);
  mpfr_ui_div(inv.lo_, 1, b.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, b.lo_, MPFR_RNDU);
  return a * inv;
}

Enclosure exp(const Enclosure& a) {
  Enclosure r(a.prec_);
  mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Enclosure log(const Enclosure& a) {
  if (mpfr_sgn(a.lo_) <= 0) throw std::domain_error("Enclosure: log of a non-positive interval");
  Enclosure r(a.prec_);
  mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Enclosure sqrt(const Enclosure& a) {
  if (mpfr_sgn(a.hi_) < 0) throw std::domain_error("Enclosure: sqrt of a negative interval");
  Enclosure r(a.prec_);
  if (mpfr_sgn(a.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, a.lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Enclosure sqr(const Enclosure& a) {
  Enclosure r(a.prec_);
  if (mpfr_sgn(a.lo_) >= 0) {
    mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  } else if (mpfr_sgn(a.hi_) <= 0) {
    mpfr_sqr(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lo_, 1);
    mpfr_t t;
    mpfr_init2(t, a.prec_);
    mpfr_sqr(r.hi_, a.lo_, MPFR_RNDU);
    mpfr_sqr(t, a.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
  }
  return r;
}

Enclosure pow(const Enclosure& a, const Rational& e) {
  if (e == 0) return Enclosure(1L, a.prec_);
  if (e.get_den() == 1 && e > 0 && e.get_num().fits_ulong_p() && mpfr_sgn(a.lo_) >= 0) {
    Enclosure r(a.prec_);
    unsigned long k = e.get_num().get_ui();
    mpfr_pow_ui(r.lo_, a.lo_, k, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, a.hi_, k, MPFR_RNDU);
    return r;
  }
  return exp(Enclosure(e, a.prec_) * log(a));
}

Enclosure min(const Enclosure& a, const Enclosure& b) {
  Enclosure r(common(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Enclosure max(const Enclosure& a, const Enclosure& b) {
  Enclosure r(common(a, b));
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Enclosure join(const Enclosure& a, const Enclosure& b) {
  Enclosure r(common(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

bool Enclosure::certainly_less(const Enclosure& b) const { return mpfr_less_p(hi_, b.lo_) != 0; }

std::optional<int> Enclosure::compare(const Rational& x) const {
  if (mpfr_cmp_q(hi_, x.get_mpq_t()) < 0) return -1;
  if (mpfr_cmp_q(lo_, x.get_mpq_t()) > 0) return 1;
  return std::nullopt;
}

bool Enclosure::contains(const Rational& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

Rational mpfr_to_rational(mpfr_srcptr x) {
  if (!mpfr_number_p(x)) throw std::domain_error("mpfr_to_rational: not a finite number");
  if (mpfr_zero_p(x)) return Rational(0);
  Integer m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  Rational r(m);
  if (e >= 0) {
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  } else {
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  }
  return r;
}

Rational Enclosure::lower_rational() const { return mpfr_to_rational(lo_); }
Rational Enclosure::upper_rational() const { return mpfr_to_rational(hi_); }

double Enclosure::approx() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

double Enclosure::width() const {
  mpfr_t t;
  mpfr_init2(t, prec_);
  mpfr_sub(t, hi_, lo_, MPFR_RNDU);
  double w = mpfr_get_d(t, MPFR_RNDU);
  mpfr_clear(t);
  return w;
}

std::string Enclosure::decimal(int digits) const {
  mpfr_t mid;
  mpfr_init2(mid, prec_ + 2);
  mpfr_add(mid, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Re", digits - 1, mid);
  mpfr_clear(mid);
  return std::string(buf.data());
}

Enclosure ln_of(const Rational& x, mpfr_prec_t prec) { return log(Enclosure(x, prec)); }

}  // namespace badcantor
