#include "badcantor/polynomial.hpp"

#include <sstream>

#include "badcantor/core.hpp"
#include "badcantor/errors.hpp"

namespace badcantor {

Polynomial::Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

Polynomial Polynomial::constant(const Rational& c) { return Polynomial({c}); }
Polynomial Polynomial::identity() { return Polynomial({Rational(0), Rational(1)}); }

Polynomial Polynomial::monomial(unsigned degree) {
  std::vector<Rational> c(degree + 1, Rational(0));
  c[degree] = 1;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational Polynomial::operator()(const Rational& x) const {
  Rational acc(0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc *= x;
    acc += *it;
  }
  return acc;
}

Enclosure Polynomial::operator()(const Enclosure& x) const {
  Enclosure acc(0L, x.precision());
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * x + Enclosure(*it, x.precision());
  }
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
  return Polynomial(std::move(d));
}

Rational Polynomial::sup_abs_bound(const RationalInterval& I) const {
  const Rational c = I.midpoint();
  const Rational h = I.length() / 2;
  // |P(c+u)| <= sum_k |P^(k)(c)/k!| h^k; the Taylor coefficients come from repeated derivatives.
  Rational bound(0);
  Polynomial d = *this;
  Integer fact(1);
  Rational hk(1);
  for (std::size_t k = 0; !d.is_zero(); ++k) {
    if (k > 0) fact *= static_cast<unsigned long>(k);
    bound += abs(d(c)) / Rational(fact) * hk;
    hk *= h;
    d = d.derivative();
  }
  return bound;
}

std::string Polynomial::serialize() const {
  if (coeffs_.empty()) return "0/1";
  std::string out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k) out += ' ';
    out += to_string(coeffs_[k]);
  }
  return out;
}

Polynomial Polynomial::parse(const std::string& text) {
  std::istringstream in(text);
  std::vector<Rational> c;
  std::string tok;
  while (in >> tok) c.push_back(parse_rational(tok));
  if (c.empty()) throw Error(ErrorCode::ParseError, "empty polynomial coefficient list");
  return Polynomial(std::move(c));
}

std::string Polynomial::pretty() const {
  if (coeffs_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (coeffs_[k] == 0) continue;
    if (!out.empty()) out += " + ";
    std::string c = coeffs_[k].get_str(10);
    if (k == 0) {
      out += c;
    } else {
      if (coeffs_[k] != 1) out += c + "*";
      out += k == 1 ? "x" : "x^" + std::to_string(k);
    }
  }
  return out;
}

}  // namespace badcantor
