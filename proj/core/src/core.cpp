#include "badcantor/core.hpp"

#include <algorithm>

namespace badcantor {

RationalInterval::RationalInterval(Rational l, Rational r) : left(std::move(l)), right(std::move(r)) {
  if (right < left) throw std::invalid_argument("RationalInterval: left > right");
}

std::optional<RationalInterval> RationalInterval::intersect(const RationalInterval& o) const {
  Rational l = left > o.left ? left : o.left;
  Rational r = right < o.right ? right : o.right;
  if (r < l) return std::nullopt;
  return RationalInterval(l, r);
}

RationalInterval RationalInterval::dilate(const Rational& k) const {
  Rational c = midpoint();
  Rational h = length() * k / 2;
  return RationalInterval(c - h, c + h);
}

Rational RationalInterval::distance(const Rational& x) const {
  if (x < left) return left - x;
  if (x > right) return x - right;
  return Rational(0);
}

std::string RationalInterval::serialize() const { return to_string(left) + " " + to_string(right); }

Weight validate_weights(const std::vector<Rational>& raw) {
  if (raw.empty()) throw Error(ErrorCode::EmptyWeight, "weight vector has no entries");
  Rational sum(0);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] <= 0) {
      throw Error(ErrorCode::NonPositiveEntry,
                  "entry " + std::to_string(i + 1) + " is " + to_string(raw[i]) +
                      "; drop zero-weight coordinates, since Bad_theta^(r^)(r^) x R = Bad_theta(r) reduces the "
                      "problem to the remaining coordinates");
    }
    sum += raw[i];
  }
  if (sum != 1) throw Error(ErrorCode::SumNotOne, "weights sum to " + to_string(sum));
  Weight w;
  w.entries_ = raw;
  std::stable_sort(w.entries_.begin(), w.entries_.end(), [](const Rational& a, const Rational& b) { return a > b; });
  return w;
}

namespace {

std::size_t rational_rank(std::vector<std::vector<Rational>> m) {
  std::size_t rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

Rational CurveModel::derivative_envelope(const RationalInterval& region) const {
  Rational sup(0);
  for (const auto& p : components) {
    Rational b = p.derivative().sup_abs_bound(region);
    if (b > sup) sup = b;
  }
  return 1 + sup;
}

CurveModel build_curve(std::vector<Polynomial> components, RationalInterval domain) {
  if (components.empty()) throw Error(ErrorCode::DimensionMismatch, "curve has no components");
  if (!(components[0] == Polynomial::identity())) {
    throw Error(ErrorCode::FirstComponentNotIdentity, "phi_1 must be x, got " + components[0].pretty());
  }
  if (!(domain.left < domain.right)) throw Error(ErrorCode::NoAdmissibleInterval, "empty curve domain");
  int maxdeg = 0;
  for (const auto& p : components) maxdeg = std::max(maxdeg, p.degree());
  std::vector<std::vector<Rational>> rows;
  rows.push_back(std::vector<Rational>(maxdeg + 1, Rational(0)));
  rows[0][0] = 1;
  for (const auto& p : components) {
    std::vector<Rational> row(maxdeg + 1, Rational(0));
    for (int k = 0; k <= p.degree(); ++k) row[k] = p.coeff(k);
    rows.push_back(std::move(row));
  }
  std::size_t rank = rational_rank(rows);
  if (rank != components.size() + 1) {
    throw Error(ErrorCode::Degenerate, "{1, phi_1, ..., phi_n} has rank " + std::to_string(rank) + " < " +
                                           std::to_string(components.size() + 1));
  }
  return CurveModel{std::move(components), std::move(domain)};
}

ShiftField build_shift(std::vector<Polynomial> components, const RationalInterval& region) {
  ShiftField s;
  s.region = region;
  for (const auto& p : components) {
    Rational b = p.derivative().sup_abs_bound(region);
    s.lipschitz.push_back(b > kLipschitzFloor ? b : kLipschitzFloor);
  }
  s.components = std::move(components);
  return s;
}

MeasureOracle MeasureOracle::lebesgue(Rational rho0) {
  MeasureOracle m;
  m.rho0 = std::move(rho0);
  return m;
}

Rational MeasureOracle::measure(const RationalInterval& I) const {
  if (kind == Kind::Lebesgue) return I.length();
  return hook(I);
}

bool MeasureOracle::deficient(const RationalInterval& I) const {
  Rational mu = measure(I);
  if (kind == Kind::Lebesgue) return mu < I.length() / 3;
  // mu < |I|^alpha / (3C)  <=>  (3C mu)^1 < |I|^alpha
  return compare_powers(3 * C * mu, Rational(1), I.length(), alpha) < 0;
}

Integer pow3(std::size_t e) { return ipow(Integer(3), static_cast<unsigned long>(e)); }

RationalInterval select_base_interval(const CurveModel& curve, const Integer& R, const MeasureOracle& measure,
                                      std::optional<Rational> center) {
  if (R < 2) throw Error(ErrorCode::NoAdmissibleInterval, "R must be at least 2");
  const RationalInterval& U = curve.domain;
  Rational x0 = center ? *center : U.midpoint();
  if (!(U.left < x0 && x0 < U.right)) {
    throw Error(ErrorCode::NoAdmissibleInterval, "center " + to_string(x0) + " is not inside U");
  }
  Rational dist = std::min(Rational(x0 - U.left), Rational(U.right - x0));
  Rational cap = std::min(measure.rho0, Rational(1)) / 3;
  Rational by_domain = dist / Rational(pow3(curve.dim() + 1));
  Rational len = std::min(cap, by_domain);
  if (!(Rational(R) > 1 / len)) {
    throw Error(ErrorCode::NoAdmissibleInterval,
                "R > 1/|I0| fails: R = " + R.get_str() + ", |I0| = " + to_string(len));
  }
  return RationalInterval(x0 - len / 2, x0 + len / 2);
}

std::vector<RationalInterval> partition(const RationalInterval& I, unsigned long R) {
  if (R < 2) throw std::invalid_argument("partition: R must be at least 2");
  std::vector<RationalInterval> out;
  out.reserve(R);
  Rational step = I.length() / Rational(static_cast<long>(R));
  Rational left = I.left;
  for (unsigned long k = 0; k < R; ++k) {
    Rational right = (k + 1 == R) ? I.right : Rational(I.left + step * Rational(static_cast<long>(k + 1)));
    out.emplace_back(left, right);
    left = right;
  }
  return out;
}

}  // namespace badcantor
