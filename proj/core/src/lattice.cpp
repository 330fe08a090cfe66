#include "badcantor/lattice.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "badcantor/constants.hpp"
#include "badcantor/parallel.hpp"

namespace badcantor {

RationalMatrix identity_matrix(std::size_t k) {
  RationalMatrix m(k, std::vector<Rational>(k, Rational(0)));
  for (std::size_t i = 0; i < k; ++i) m[i][i] = 1;
  return m;
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  const std::size_t n = a.size(), inner = b.size(), m = b.empty() ? 0 : b[0].size();
  if (!a.empty() && a[0].size() != inner) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  RationalMatrix c(n, std::vector<Rational>(m, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

RationalMatrix transpose(const RationalMatrix& a) {
  if (a.empty()) return a;
  RationalMatrix t(a[0].size(), std::vector<Rational>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Rational determinant(RationalMatrix a) {
  const std::size_t n = a.size();
  bool upper = true;
  for (std::size_t i = 1; i < n && upper; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (a[i][j] != 0) {
        upper = false;
        break;
      }
  if (upper) {
    Rational det(1);
    for (std::size_t i = 0; i < n; ++i) det *= a[i][i];
    return det;
  }
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return Rational(0);
    if (p != c) {
      std::swap(a[p], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

RationalMatrix inverse(const RationalMatrix& in) {
  const std::size_t n = in.size();
  RationalMatrix a = in, inv = identity_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw Error(ErrorCode::DimensionMismatch, "singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = a[c][c];
    for (std::size_t k = 0; k < n; ++k) {
      a[c][k] /= piv;
      inv[c][k] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  return inv;
}

std::string_view flow_kind_name(FlowKind k) {
  switch (k) {
    case FlowKind::A: return "a";
    case FlowKind::B: return "b";
    case FlowKind::U: return "u";
    case FlowKind::U1: return "u1";
    case FlowKind::Z: return "z";
    case FlowKind::Product: return "product";
  }
  return "?";
}

std::vector<std::vector<Enclosure>> FlowMatrix::entries(mpfr_prec_t prec) const {
  const std::size_t k = dim();
  std::vector<std::vector<Enclosure>> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    Enclosure d = base.power(log_diag[i], prec);
    out[i].reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
      if (shear[i][j] == 0) {
        out[i].emplace_back(0L, prec);
      } else {
        out[i].push_back(d * Enclosure(shear[i][j], prec));
      }
    }
  }
  return out;
}

Enclosure FlowMatrix::determinant(mpfr_prec_t prec) const {
  Rational sum(0);
  for (const auto& e : log_diag) sum += e;
  Rational ds = badcantor::determinant(shear);
  return base.power(sum, prec) * Enclosure(ds, prec);
}

bool FlowMatrix::exactly_unimodular() const {
  Rational sum(0);
  for (const auto& e : log_diag) sum += e;
  return sum == 0 && badcantor::determinant(shear) == 1;
}

static bool is_identity(const RationalMatrix& m) { return m == identity_matrix(m.size()); }

FlowMatrix operator*(const FlowMatrix& lhs, const FlowMatrix& rhs) {
  if (lhs.dim() != rhs.dim()) throw Error(ErrorCode::DimensionMismatch, "flow product of different sizes");
  bool rhs_diag_trivial = std::all_of(rhs.log_diag.begin(), rhs.log_diag.end(), [](const Rational& r) { return r == 0; });
  bool lhs_diag_trivial = std::all_of(lhs.log_diag.begin(), lhs.log_diag.end(), [](const Rational& r) { return r == 0; });
  FlowMatrix out;
  out.kind = FlowKind::Product;
  out.base = lhs_diag_trivial ? rhs.base : lhs.base;
  if (!lhs_diag_trivial && !rhs_diag_trivial && !(lhs.base == rhs.base)) {
    throw Error(ErrorCode::DimensionMismatch, "flow product with different scale bases");
  }
  if (is_identity(lhs.shear)) {
    out.log_diag = lhs.log_diag;
    for (std::size_t i = 0; i < out.log_diag.size(); ++i) out.log_diag[i] += rhs.log_diag[i];
    out.shear = rhs.shear;
  } else if (rhs_diag_trivial) {
    out.log_diag = lhs.log_diag;
    out.shear = multiply(lhs.shear, rhs.shear);
  } else {
    throw Error(ErrorCode::DimensionMismatch, "flow product is not of diagonal-times-rational form");
  }
  return out;
}

FlowMatrix flow_a(const Weight& r, const Rational& s, const ScaleBase& base) {
  FlowMatrix m;
  m.kind = FlowKind::A;
  m.base = base;
  m.log_diag.push_back(s);
  for (const auto& ri : r.entries()) m.log_diag.push_back(-ri * s);
  m.shear = identity_matrix(r.dim() + 1);
  return m;
}

FlowMatrix flow_b(std::size_t n, const Rational& s, const ScaleBase& base) {
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "b(t) needs n >= 1");
  FlowMatrix m;
  m.kind = FlowKind::B;
  m.base = base;
  Rational shrink = -s / Rational(static_cast<long>(n));
  m.log_diag.assign(n + 1, shrink);
  m.log_diag[1] = s;
  m.shear = identity_matrix(n + 1);
  return m;
}

FlowMatrix flow_u(const std::vector<Rational>& x) {
  const std::size_t n = x.size();
  if (n < 1) throw Error(ErrorCode::DimensionMismatch, "u(x) needs x in R^n, n >= 1");
  FlowMatrix m;
  m.kind = FlowKind::U;
  m.log_diag.assign(n + 1, Rational(0));
  m.shear = identity_matrix(n + 1);
  for (std::size_t j = 0; j < n; ++j) m.shear[0][j + 1] = x[j];
  return m;
}

FlowMatrix flow_u1(const std::vector<Rational>& y) {
  const std::size_t n = y.size() + 1;
  FlowMatrix m;
  m.kind = FlowKind::U1;
  m.log_diag.assign(n + 1, Rational(0));
  m.shear = identity_matrix(n + 1);
  for (std::size_t j = 0; j < y.size(); ++j) m.shear[1][j + 2] = y[j];
  return m;
}

FlowMatrix flow_z(const CurveModel& curve, const Rational& x) {
  std::vector<Rational> y;
  for (std::size_t i = 1; i < curve.dim(); ++i) y.push_back(curve.components[i].derivative()(x));
  FlowMatrix m = flow_u1(y);
  m.kind = FlowKind::Z;
  return m;
}

FlowMatrix dani_matrix(FlowKind kind, const DaniParams& p) {
  switch (kind) {
    case FlowKind::A:
      if (!p.weights || p.weights->dim() != p.n) throw Error(ErrorCode::DimensionMismatch, "a(t) needs a weight of length n");
      return flow_a(*p.weights, p.s, p.base);
    case FlowKind::B:
      return flow_b(p.n, p.s, p.base);
    case FlowKind::U:
      if (p.vec.size() != p.n) throw Error(ErrorCode::DimensionMismatch, "u(x) needs x of length n");
      return flow_u(p.vec);
    case FlowKind::U1:
      if (p.n < 1 || p.vec.size() != p.n - 1) throw Error(ErrorCode::DimensionMismatch, "u1(y) needs y of length n-1");
      return flow_u1(p.vec);
    case FlowKind::Z:
      if (!p.curve || p.curve->dim() != p.n) throw Error(ErrorCode::DimensionMismatch, "z(x) needs a curve of dimension n");
      return flow_z(*p.curve, p.x);
    case FlowKind::Product:
      break;
  }
  throw Error(ErrorCode::DimensionMismatch, "dani_matrix: products are built with operator*");
}

namespace {

struct ScaleEntry {
  Enclosure enc;
  long double approx;
};

const ScaleEntry& scale_value(const ScaleBase& base, const Rational& e, mpfr_prec_t prec) {
  thread_local std::map<std::string, ScaleEntry> cache;
  std::string key = base.describe() + "|" + to_string(e) + "|" + std::to_string(prec);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 200000) cache.clear();
  Enclosure enc = base.power(e, prec);
  long double approx = 0.5L * (mpfr_get_ld(enc.lo(), MPFR_RNDN) + mpfr_get_ld(enc.hi(), MPFR_RNDN));
  return cache.emplace(std::move(key), ScaleEntry{std::move(enc), approx}).first->second;
}

// Arbitrary-precision fallback scalar for reduction of badly skewed bases.
class MpReal {
 public:
  static constexpr mpfr_prec_t kPrec = 320;
  MpReal() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
  MpReal(long double x) { mpfr_init2(v_, kPrec); mpfr_set_ld(v_, x, MPFR_RNDN); }
  MpReal(const MpReal& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpReal& operator=(const MpReal& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
  ~MpReal() { mpfr_clear(v_); }

  static MpReal ratio(const Integer& num, const Integer& den) {
    MpReal r;
    mpfr_set_z(r.v_, num.get_mpz_t(), MPFR_RNDN);
    mpfr_div_z(r.v_, r.v_, den.get_mpz_t(), MPFR_RNDN);
    return r;
  }
  static MpReal from_enclosure(const Enclosure& e) {
    MpReal r;
    mpfr_add(r.v_, e.lo(), e.hi(), MPFR_RNDN);
    mpfr_div_2ui(r.v_, r.v_, 1, MPFR_RNDN);
    return r;
  }
  friend MpReal operator+(const MpReal& a, const MpReal& b) { MpReal r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator-(const MpReal& a, const MpReal& b) { MpReal r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator*(const MpReal& a, const MpReal& b) { MpReal r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend MpReal operator/(const MpReal& a, const MpReal& b) { MpReal r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  MpReal& operator+=(const MpReal& b) { mpfr_add(v_, v_, b.v_, MPFR_RNDN); return *this; }
  MpReal& operator-=(const MpReal& b) { mpfr_sub(v_, v_, b.v_, MPFR_RNDN); return *this; }
  friend bool operator<(const MpReal& a, const MpReal& b) { return mpfr_less_p(a.v_, b.v_); }
  Integer round() const { Integer z; mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN); return z; }
  long double to_ld() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  bool finite() const { return mpfr_number_p(v_); }

 private:
  mpfr_t v_;
};

struct LdReal {
  static long double ratio(const Integer& num, const Integer& den) {
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
    double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
    if (mn == 0.0) return 0.0L;
    return std::ldexp(static_cast<long double>(mn) / static_cast<long double>(md), static_cast<int>(en - ed));
  }
  static long double from_enclosure(const Enclosure& e) {
    return 0.5L * (mpfr_get_ld(e.lo(), MPFR_RNDN) + mpfr_get_ld(e.hi(), MPFR_RNDN));
  }
  static Integer round(long double x) {
    long double r = std::nearbyint(x);
    Integer z;
    if (std::fabs(r) < 9.0e18L) {
      z = static_cast<long>(r);
    } else {
      mpz_set_d(z.get_mpz_t(), static_cast<double>(r));
    }
    return z;
  }
  static long double to_ld(long double x) { return x; }
  static bool finite(long double x) { return std::isfinite(x); }
};

template <class Real>
Integer round_real(const Real& x) {
  if constexpr (std::is_same_v<Real, long double>) {
    return LdReal::round(x);
  } else {
    return x.round();
  }
}

template <class Real>
Real ratio_real(const Integer& num, const Integer& den) {
  if constexpr (std::is_same_v<Real, long double>) {
    return LdReal::ratio(num, den);
  } else {
    return MpReal::ratio(num, den);
  }
}

template <class Real>
long double to_ld(const Real& x) {
  if constexpr (std::is_same_v<Real, long double>) {
    return x;
  } else {
    return x.to_ld();
  }
}

// Lattice D * (Mi / den) with exact integer columns; reduction keeps C = Mi * T exactly.
struct ExactLattice {
  std::size_t k = 0;
  std::vector<std::vector<Integer>> Mi;  // row-major
  Integer den;
  std::vector<const ScaleEntry*> scale;
  long double log_det = 0;               // ln |det|
};

ExactLattice make_exact(const LatticeBasis& basis, mpfr_prec_t prec) {
  const FlowMatrix& g = basis.g;
  ExactLattice L;
  L.k = g.dim();
  if (L.k < 1 || L.k > 6) throw Error(ErrorCode::DimensionMismatch, "shortest_nonzero supports dimension 1..6");
  L.den = 1;
  for (const auto& row : g.shear)
    for (const auto& x : row) mpz_lcm(L.den.get_mpz_t(), L.den.get_mpz_t(), x.get_den_mpz_t());
  L.Mi.assign(L.k, std::vector<Integer>(L.k));
  for (std::size_t i = 0; i < L.k; ++i)
    for (std::size_t j = 0; j < L.k; ++j) {
      const Rational& x = g.shear[i][j];
      L.Mi[i][j] = x.get_num() * (L.den / x.get_den());
    }
  Rational sum(0);
  for (std::size_t i = 0; i < L.k; ++i) {
    L.scale.push_back(&scale_value(g.base, g.log_diag[i], prec));
    sum += g.log_diag[i];
  }
  Rational ds = determinant(g.shear);
  if (ds == 0) throw Error(ErrorCode::DimensionMismatch, "singular lattice basis");
  L.log_det = static_cast<long double>(sum.get_d()) * g.base.ln_approx() +
              std::log(std::fabs(static_cast<long double>(ds.get_d())));
  return L;
}

template <class Real>
struct Reduction {
  std::vector<std::vector<Integer>> C;  // C[j] = column j of Mi*T
  std::vector<std::vector<Integer>> T;  // T[j] = column j of T
  std::vector<std::vector<Real>> f;     // floating columns
  std::vector<std::vector<Real>> mu;
  std::vector<Real> bstar;
  std::vector<Real> d;
  bool ok = true;
};

template <class Real>
void refresh_column(const ExactLattice& L, Reduction<Real>& st, std::size_t j) {
  for (std::size_t i = 0; i < L.k; ++i) st.f[j][i] = st.d[i] * ratio_real<Real>(st.C[j][i], L.den);
}

template <class Real>
void gram_schmidt(std::size_t k, Reduction<Real>& st, std::size_t upto) {
  std::array<std::array<Real, 6>, 6> star;
  for (std::size_t i = 0; i <= upto; ++i) {
    for (std::size_t t = 0; t < k; ++t) star[i][t] = st.f[i][t];
    for (std::size_t j = 0; j < i; ++j) {
      Real dot = Real(0);
      for (std::size_t t = 0; t < k; ++t) dot += st.f[i][t] * star[j][t];
      st.mu[i][j] = dot / st.bstar[j];
      for (std::size_t t = 0; t < k; ++t) star[i][t] -= st.mu[i][j] * star[j][t];
    }
    Real nn = Real(0);
    for (std::size_t t = 0; t < k; ++t) nn += star[i][t] * star[i][t];
    st.bstar[i] = nn;
  }
}

template <class Real>
Reduction<Real> reduce(const ExactLattice& L) {
  const std::size_t k = L.k;
  Reduction<Real> st;
  st.C.assign(k, std::vector<Integer>(k));
  st.T.assign(k, std::vector<Integer>(k, Integer(0)));
  st.f.assign(k, std::vector<Real>(k));
  st.mu.assign(k, std::vector<Real>(k));
  st.bstar.assign(k, Real(0));
  for (std::size_t i = 0; i < k; ++i) {
    if constexpr (std::is_same_v<Real, long double>) {
      st.d.push_back(L.scale[i]->approx);
    } else {
      st.d.push_back(MpReal::from_enclosure(L.scale[i]->enc));
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    st.T[j][j] = 1;
    for (std::size_t i = 0; i < k; ++i) st.C[j][i] = L.Mi[i][j];
    refresh_column(L, st, j);
  }
  const Real delta = Real(0.99L);
  std::size_t idx = 1;
  long iterations = 0;
  Integer tmp;
  while (idx < k) {
    if (++iterations > 200000) {
      st.ok = false;
      return st;
    }
    gram_schmidt(k, st, idx);
    for (std::size_t jj = idx; jj-- > 0;) {
      Integer r = round_real<Real>(st.mu[idx][jj]);
      if (r == 0) continue;
      for (std::size_t i = 0; i < k; ++i) {
        mpz_submul(st.C[idx][i].get_mpz_t(), r.get_mpz_t(), st.C[jj][i].get_mpz_t());
        mpz_submul(st.T[idx][i].get_mpz_t(), r.get_mpz_t(), st.T[jj][i].get_mpz_t());
      }
      refresh_column(L, st, idx);
      gram_schmidt(k, st, idx);
    }
    Real m = st.mu[idx][idx - 1];
    Real lhs = st.bstar[idx];
    Real rhs = (delta - m * m) * st.bstar[idx - 1];
    if (!(lhs < rhs)) {
      ++idx;
    } else {
      std::swap(st.C[idx], st.C[idx - 1]);
      std::swap(st.T[idx], st.T[idx - 1]);
      std::swap(st.f[idx], st.f[idx - 1]);
      idx = idx > 1 ? idx - 1 : 1;
    }
  }
  gram_schmidt(k, st, k - 1);
  // Gram-Schmidt consistency: prod |b*_i|^2 = det^2.
  long double lsum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    long double b = to_ld(st.bstar[i]);
    if (!(b > 0) || !std::isfinite(b)) {
      st.ok = false;
      return st;
    }
    lsum += std::log(b);
  }
  if (std::fabs(lsum - 2 * L.log_det) > 1e-6L) st.ok = false;
  return st;
}

struct Candidate {
  long double norm2;
  std::vector<long> c;
};

// Fincke-Pohst enumeration over the reduced basis; keeps every vector within the running radius.
std::vector<Candidate> enumerate_short(std::size_t k, const std::vector<std::vector<long double>>& mu,
                                       const std::vector<long double>& bstar, long double radius2) {
  std::vector<Candidate> found;
  std::vector<long> c(k, 0);
  std::vector<long double> partial(k + 1, 0.0L);
  long nodes = 0;
  const long double slack = 1.0L + 1e-9L;
  long double limit = radius2 * slack;
  // Recursive lambda over levels k-1 .. 0.
  auto rec = [&](auto&& self, std::size_t level, bool all_zero_above) -> void {
    if (++nodes > 5000000) throw Error(ErrorCode::PrecisionExhausted, "lattice enumeration exceeded node budget");
    long double center = 0;
    for (std::size_t j = level + 1; j < k; ++j) center -= mu[j][level] * static_cast<long double>(c[j]);
    long double rem = limit - partial[level + 1];
    if (rem < 0) return;
    long double w = std::sqrt(rem / bstar[level]);
    long lo = static_cast<long>(std::ceil(center - w));
    long hi = static_cast<long>(std::floor(center + w));
    if (all_zero_above && lo < 0) lo = 0;
    for (long v = lo; v <= hi; ++v) {
      long double y = static_cast<long double>(v) - center;
      long double contrib = bstar[level] * y * y;
      if (partial[level + 1] + contrib > limit) continue;
      c[level] = v;
      partial[level] = partial[level + 1] + contrib;
      bool zero_here = all_zero_above && v == 0;
      if (level == 0) {
        if (zero_here) continue;
        found.push_back({partial[0], c});
        if (partial[0] * slack < limit) limit = partial[0] * slack;
      } else {
        self(self, level - 1, zero_here);
      }
    }
    c[level] = 0;
  };
  rec(rec, k - 1, true);
  long double best = limit;
  for (const auto& f : found) best = std::min(best, f.norm2);
  std::vector<Candidate> out;
  for (auto& f : found)
    if (f.norm2 <= best * slack) out.push_back(std::move(f));
  return out;
}

template <class Real>
std::optional<ShortestVector> try_shortest(const ExactLattice& L, mpfr_prec_t prec) {
  Reduction<Real> st = reduce<Real>(L);
  if (!st.ok) return std::nullopt;
  const std::size_t k = L.k;
  std::vector<std::vector<long double>> mu(k, std::vector<long double>(k, 0.0L));
  std::vector<long double> bstar(k);
  for (std::size_t i = 0; i < k; ++i) {
    bstar[i] = to_ld(st.bstar[i]);
    for (std::size_t j = 0; j < i; ++j) mu[i][j] = to_ld(st.mu[i][j]);
  }
  long double radius2 = 0;
  for (std::size_t j = 0; j < k; ++j) {
    long double nn = 0;
    for (std::size_t i = 0; i < k; ++i) nn += to_ld(st.f[j][i]) * to_ld(st.f[j][i]);
    radius2 = j == 0 ? nn : std::min(radius2, nn);
  }
  std::vector<Candidate> cands = enumerate_short(k, mu, bstar, radius2);
  if (cands.empty()) return std::nullopt;

  std::optional<ShortestVector> best;
  for (const auto& cand : cands) {
    std::vector<Integer> v(k, Integer(0));
    for (std::size_t j = 0; j < k; ++j) {
      if (cand.c[j] == 0) continue;
      for (std::size_t i = 0; i < k; ++i) v[i] += st.T[j][i] * cand.c[j];
    }
    Enclosure norm2(0L, prec);
    for (std::size_t i = 0; i < k; ++i) {
      Integer w = 0;
      for (std::size_t j = 0; j < k; ++j) w += L.Mi[i][j] * v[j];
      if (w == 0) continue;
      Enclosure e = L.scale[i]->enc * Enclosure(make_rational(w, L.den), prec);
      norm2 = norm2 + sqr(e);
    }
    Enclosure norm = sqrt(norm2);
    // Canonical sign: first nonzero coefficient positive.
    for (std::size_t i = 0; i < k; ++i) {
      if (v[i] == 0) continue;
      if (v[i] < 0)
        for (auto& x : v) x = -x;
      break;
    }
    if (!best) {
      best = ShortestVector{std::move(v), std::move(norm)};
      continue;
    }
    bool better = norm.certainly_less(best->norm) ||
                  (!best->norm.certainly_less(norm) && v < best->coeffs);
    Enclosure joined = min(best->norm, norm);
    if (better) {
      best->coeffs = std::move(v);
    }
    best->norm = std::move(joined);
  }
  return best;
}

}  // namespace

ShortestVector shortest_nonzero(const LatticeBasis& basis, mpfr_prec_t prec) {
  ExactLattice L = make_exact(basis, prec);
  if (auto r = try_shortest<long double>(L, prec)) return *r;
  if (auto r = try_shortest<MpReal>(L, prec)) return *r;
  throw Error(ErrorCode::PrecisionExhausted, "lattice reduction lost accuracy for " + basis.provenance);
}

Enclosure Threshold::value(const ScaleBase& base, mpfr_prec_t prec) const {
  if (log_exponent == 0) return Enclosure(coeff, prec);
  const Enclosure& p = scale_value(base, log_exponent, prec).enc;
  if (coeff == 1) return p;
  return Enclosure(coeff, prec) * p;
}

bool in_compact(const LatticeBasis& basis, const Threshold& eps, mpfr_prec_t start) {
  if (eps.coeff <= 0) throw std::invalid_argument("in_compact: eps must be positive");
  for (mpfr_prec_t prec = start; prec <= kMaxPrecision; prec *= 2) {
    ShortestVector sv = shortest_nonzero(basis, prec);
    Enclosure e = eps.value(basis.g.base, prec);
    if (mpfr_lessequal_p(e.hi(), sv.norm.lo())) return true;
    if (sv.norm.certainly_less(e)) return false;
  }
  throw Error(ErrorCode::Undecidable, "shortest norm within precision of eps for " + basis.provenance);
}

bool in_compact(const LatticeBasis& basis, const Rational& eps, mpfr_prec_t start) {
  return in_compact(basis, Threshold{eps, Rational(0)}, start);
}

LatticeBasis escape_lattice(const CurveModel& curve, const Weight& r, const ScaleBase& base, const Rational& x, long l,
                            long q) {
  const std::size_t n = curve.dim();
  const Rational sa = Rational(q + 1) / (1 + r.r1());
  const Rational sb = Rational(l) * Rational(static_cast<long>(n)) / Rational(static_cast<long>(n + 1));
  FlowMatrix g;
  g.kind = FlowKind::Product;
  g.base = base;
  g.log_diag.resize(n + 1);
  const Rational shrink = -sb / Rational(static_cast<long>(n));
  g.log_diag[0] = sa + shrink;
  for (std::size_t i = 1; i <= n; ++i) g.log_diag[i] = -r[i - 1] * sa + (i == 1 ? sb : shrink);
  // z(x) u(phi(x)): first row (1, phi), second row (0, 1, phi_2', ..., phi_n'), identity below.
  g.shear = identity_matrix(n + 1);
  for (std::size_t j = 0; j < n; ++j) g.shear[0][j + 1] = curve.value(j, x);
  for (std::size_t j = 1; j < n; ++j) g.shear[1][j + 1] = curve.components[j].derivative()(x);
  return LatticeBasis{std::move(g), "b(beta' " + std::to_string(l) + ") a(beta " + std::to_string(q + 1) +
                                        ") z(x) u(phi(x))"};
}

Threshold escape_threshold(const Weight& r, const Rational& epsilon, long l) {
  return Threshold{Rational(1), -epsilon * Rational(l) / (1 + r.r1())};
}

bool escape_witness(const CurveModel& curve, const RationalInterval& I, long l, long q, const ConstantSheet& sheet,
                    int samples) {
  if (samples < 1) throw std::invalid_argument("escape_witness: samples must be positive");
  if (l < 1 || 4 * l > q) {
    throw std::invalid_argument("escape_witness: l outside 1 <= l <= q/4");
  }
  Threshold eps = escape_threshold(sheet.weights, sheet.epsilon, l);
  auto sample = [&](int s) {
    if (samples == 1) return I.midpoint();
    return Rational(I.left + I.length() * Rational(s) / Rational(samples - 1));
  };
  auto escapes = [&](int s) {
    LatticeBasis b = escape_lattice(curve, sheet.weights, sheet.R, sample(s), l, q);
    return !in_compact(b, eps, sheet.precision);
  };
  unsigned hw = std::thread::hardware_concurrency();
  if (hw <= 1) {
    for (int s = 0; s < samples; ++s)
      if (escapes(s)) return true;
    return false;
  }
  std::atomic<bool> hit{false};
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t s) {
    if (hit.load()) return;
    if (escapes(static_cast<int>(s))) hit.store(true);
  });
  return hit.load();
}

LatticeBasis orbit_lattice(const CurveModel& curve, const Weight& r, const ScaleBase& base, const Rational& x,
                           const Rational& t) {
  std::vector<Rational> phi;
  for (std::size_t i = 0; i < curve.dim(); ++i) phi.push_back(curve.value(i, x));
  FlowMatrix g = flow_a(r, t / (1 + r.r1()), base) * flow_u(phi);
  return LatticeBasis{std::move(g), "a(beta " + to_string(t) + ") u(phi(x))"};
}

}  // namespace badcantor
