#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace badcantor {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "a", "-a", "a/b"; the result is canonical.
Rational parse_rational(std::string_view text);
Integer parse_integer(std::string_view text);

/// Always "num/den", den >= 1.
std::string to_string(const Rational& x);
std::string to_string(const Integer& x);

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

Integer floor(const Rational& x);
Integer ceil(const Rational& x);
Integer nearest_integer(const Rational& x);
/// Distance to the nearest integer.
Rational dist_to_integer(const Rational& x);
Rational abs(const Rational& x);

Integer ipow(const Integer& base, unsigned long e);
Rational ipow(const Rational& base, unsigned long e);
/// base^e for a signed exponent (base != 0 if e < 0).
Rational ipow_signed(const Rational& base, long e);

Integer floor_root(const Integer& a, unsigned long k);
Integer ceil_root(const Integer& a, unsigned long k);

/// Smallest k/2^bits >= base^exponent, base >= 0, exponent >= 0.
Rational ceil_power_dyadic(const Rational& base, const Rational& exponent, unsigned bits);
/// Largest k/2^bits <= base^exponent, base >= 0, exponent >= 0.
Rational floor_power_dyadic(const Rational& base, const Rational& exponent, unsigned bits);

/// Sign of a^ea - b^eb for a, b >= 0 and rational exponents (0^e with e <= 0 is rejected).
int compare_powers(const Rational& a, const Rational& ea, const Rational& b, const Rational& eb);

/// Truncation of x to a dyadic rational with the given number of fractional bits, rounding down.
Rational floor_dyadic(const Rational& x, unsigned bits);
Rational ceil_dyadic(const Rational& x, unsigned bits);

unsigned long to_ulong_checked(const Integer& x);
long to_long_checked(const Integer& x);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);

}  // namespace badcantor
