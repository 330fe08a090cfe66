#include "badcantor/rational.hpp"

#include <cctype>
#include <limits>

#include "badcantor/errors.hpp"

namespace badcantor {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SumNotOne: return "SumNotOne";
    case ErrorCode::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorCode::EmptyWeight: return "EmptyWeight";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::FirstComponentNotIdentity: return "FirstComponentNotIdentity";
    case ErrorCode::NoAdmissibleInterval: return "NoAdmissibleInterval";
    case ErrorCode::DegenerateXi: return "DegenerateXi";
    case ErrorCode::RInadmissible: return "RInadmissible";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::Undecidable: return "Undecidable";
    case ErrorCode::MTooSmall: return "MTooSmall";
    case ErrorCode::Extinct: return "Extinct";
    case ErrorCode::CertificateBroken: return "CertificateBroken";
    case ErrorCode::NoPrimalSolution: return "NoPrimalSolution";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

bool is_integer_token(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Integer parse_integer(std::string_view text) {
  text = trim(text);
  if (!is_integer_token(text)) {
    throw Error(ErrorCode::ParseError, "not an integer: '" + std::string(text) + "'");
  }
  std::string s(text[0] == '+' ? text.substr(1) : text);
  return Integer(s, 10);
}

Rational parse_rational(std::string_view text) {
  text = trim(text);
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_integer(text));
  Integer num = parse_integer(text.substr(0, slash));
  Integer den = parse_integer(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator: '" + std::string(text) + "'");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

std::string to_string(const Integer& x) { return x.get_str(10); }

std::string to_string(const Rational& x) {
  return x.get_num().get_str(10) + "/" + x.get_den().get_str(10);
}

Rational make_rational(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(const Integer& num, const Integer& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer nearest_integer(const Rational& x) { return floor(x + Rational(1, 2)); }

Rational dist_to_integer(const Rational& x) {
  Rational f = x - Rational(floor(x));
  Rational g = 1 - f;
  return f < g ? f : g;
}

Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Integer ipow(const Integer& base, unsigned long e) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

Rational ipow(const Rational& base, unsigned long e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  r.canonicalize();
  return r;
}

Rational ipow_signed(const Rational& base, long e) {
  if (e >= 0) return ipow(base, static_cast<unsigned long>(e));
  if (base == 0) throw std::domain_error("ipow_signed: zero base with negative exponent");
  Rational inv = 1 / base;
  return ipow(inv, static_cast<unsigned long>(-e));
}

Integer floor_root(const Integer& a, unsigned long k) {
  if (a < 0) throw std::domain_error("floor_root: negative radicand");
  Integer r;
  mpz_root(r.get_mpz_t(), a.get_mpz_t(), k);
  return r;
}

Integer ceil_root(const Integer& a, unsigned long k) {
  Integer r = floor_root(a, k);
  if (ipow(r, k) < a) r += 1;
  return r;
}

namespace {

// floor((base^exponent) * 2^bits) via integer roots.
Integer scaled_power_floor(const Rational& base, const Rational& exponent, unsigned bits, bool ceiling) {
  if (base < 0 || exponent < 0) throw std::domain_error("power_dyadic: negative argument");
  unsigned long s = to_ulong_checked(exponent.get_num());
  unsigned long t = to_ulong_checked(exponent.get_den());
  // value * 2^bits = (num^s * 2^(bits*t) / den^s)^(1/t)
  Integer num = ipow(Integer(base.get_num()), s);
  Integer den = ipow(Integer(base.get_den()), s);
  Integer scaled = num << (static_cast<mp_bitcnt_t>(bits) * t);
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  bool exact_div = (q * den == scaled);
  Integer r = floor_root(q, t);
  if (!ceiling) return r;
  if (exact_div && ipow(r, t) == q) return r;
  return r + 1;
}

}  // namespace

Rational ceil_power_dyadic(const Rational& base, const Rational& exponent, unsigned bits) {
  Integer k = scaled_power_floor(base, exponent, bits, true);
  Rational r(k, Integer(1) << bits);
  r.canonicalize();
  return r;
}

Rational floor_power_dyadic(const Rational& base, const Rational& exponent, unsigned bits) {
  Integer k = scaled_power_floor(base, exponent, bits, false);
  Rational r(k, Integer(1) << bits);
  r.canonicalize();
  return r;
}

int compare_powers(const Rational& a0, const Rational& ea0, const Rational& b0, const Rational& eb0) {
  if (a0 < 0 || b0 < 0) throw std::domain_error("compare_powers: negative base");
  Rational a = a0, ea = ea0, b = b0, eb = eb0;
  if ((a == 0 && ea <= 0) || (b == 0 && eb <= 0)) {
    throw std::domain_error("compare_powers: 0 to a non-positive power");
  }
  if (ea < 0) { a = 1 / a; ea = -ea; }
  if (eb < 0) { b = 1 / b; eb = -eb; }
  if (ea == 0) a = 1, ea = 1;
  if (eb == 0) b = 1, eb = 1;
  Integer L;
  mpz_lcm(L.get_mpz_t(), ea.get_den_mpz_t(), eb.get_den_mpz_t());
  Integer pa = ea.get_num() * (L / ea.get_den());
  Integer pb = eb.get_num() * (L / eb.get_den());
  Rational lhs = ipow(a, to_ulong_checked(pa));
  Rational rhs = ipow(b, to_ulong_checked(pb));
  return cmp(lhs, rhs) < 0 ? -1 : (cmp(lhs, rhs) > 0 ? 1 : 0);
}

Rational floor_dyadic(const Rational& x, unsigned bits) {
  Integer scaled = x.get_num() << bits;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  Rational r(q, Integer(1) << bits);
  r.canonicalize();
  return r;
}

Rational ceil_dyadic(const Rational& x, unsigned bits) {
  Integer scaled = x.get_num() << bits;
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den_mpz_t());
  Rational r(q, Integer(1) << bits);
  r.canonicalize();
  return r;
}

unsigned long to_ulong_checked(const Integer& x) {
  if (x < 0 || !x.fits_ulong_p()) throw std::overflow_error("integer does not fit unsigned long: " + x.get_str());
  return x.get_ui();
}

long to_long_checked(const Integer& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("integer does not fit long: " + x.get_str());
  return x.get_si();
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace badcantor
