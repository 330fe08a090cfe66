#pragma once

#include <mpfr.h>

#include <optional>
#include <string>

#include "badcantor/rational.hpp"

namespace badcantor {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;
inline constexpr mpfr_prec_t kMaxPrecision = 512;

/// Closed real interval [lo, hi] with MPFR endpoints and outward rounding.
class Enclosure {
 public:
  explicit Enclosure(mpfr_prec_t prec = kDefaultPrecision);
  Enclosure(const Rational& x, mpfr_prec_t prec);
  Enclosure(long x, mpfr_prec_t prec);
  Enclosure(const Enclosure& other);
  Enclosure(Enclosure&& other) noexcept;
  Enclosure& operator=(const Enclosure& other);
  Enclosure& operator=(Enclosure&& other) noexcept;
  ~Enclosure();

  static Enclosure hull(const Rational& a, const Rational& b, mpfr_prec_t prec);

  mpfr_prec_t precision() const { return prec_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }

  Enclosure operator-() const;
  friend Enclosure operator+(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator-(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator*(const Enclosure& a, const Enclosure& b);
  friend Enclosure operator/(const Enclosure& a, const Enclosure& b);
  Enclosure& operator+=(const Enclosure& b) { return *this = *this + b; }
  Enclosure& operator*=(const Enclosure& b) { return *this = *this * b; }

  friend Enclosure exp(const Enclosure& a);
  friend Enclosure log(const Enclosure& a);
  friend Enclosure sqrt(const Enclosure& a);
  friend Enclosure sqr(const Enclosure& a);
  /// a^e for a > 0.
  friend Enclosure pow(const Enclosure& a, const Rational& e);
  friend Enclosure min(const Enclosure& a, const Enclosure& b);
  friend Enclosure max(const Enclosure& a, const Enclosure& b);
  friend Enclosure join(const Enclosure& a, const Enclosure& b);

  bool certainly_less(const Enclosure& b) const;
  bool certainly_greater(const Enclosure& b) const { return b.certainly_less(*this); }
  /// -1 / +1 when the whole interval is below / above x; nullopt when x is inside.
  std::optional<int> compare(const Rational& x) const;
  bool contains(const Rational& x) const;
  bool positive() const { return mpfr_sgn(lo_) > 0; }

  Rational lower_rational() const;
  Rational upper_rational() const;
  double approx() const;
  double width() const;
  /// Midpoint with the given number of significant digits in scientific notation.
  std::string decimal(int digits = 40) const;

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
};

Rational mpfr_to_rational(mpfr_srcptr x);
Enclosure ln_of(const Rational& x, mpfr_prec_t prec);

}  // namespace badcantor
