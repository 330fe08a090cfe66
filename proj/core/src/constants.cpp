#include "badcantor/constants.hpp"

#include <algorithm>

#include "badcantor/lattice.hpp"
#include "badcantor/parallel.hpp"

namespace badcantor {

Rational ConstantSheet::d_tail_max() const {
  Rational m(0);
  for (std::size_t i = 1; i < d.size(); ++i) m = std::max(m, d[i]);
  return m;
}

Exponents derive_exponents(const ScaleBase& R, const Weight& r, std::size_t n, mpfr_prec_t prec) {
  if (r.dim() != n) throw Error(ErrorCode::DimensionMismatch, "weight length differs from n");
  Exponents e;
  e.beta_units = 1 / (1 + r.r1());
  e.beta_prime_units = Rational(static_cast<long>(n)) / Rational(static_cast<long>(n + 1));
  e.epsilon = r.rn() / Rational(static_cast<long>(8 * n));
  Enclosure lnR = R.ln(prec);
  e.beta = lnR * Enclosure(e.beta_units, prec);
  e.beta_prime = lnR * Enclosure(e.beta_prime_units, prec);
  return e;
}

Rational xi_sample_offset() {
  // 0x9E3779B97F4A7C15 / 2^64
  Rational w(Integer("11400714819323198485"), Integer(1) << 64);
  w.canonicalize();
  return w;
}

std::vector<Rational> xi_sample_points(const RationalInterval& I0, int samples) {
  std::vector<Rational> xs;
  Rational w = xi_sample_offset();
  for (int k = 0; k < samples; ++k) xs.push_back(I0.left + I0.length() * (Rational(k) + w) / Rational(samples));
  return xs;
}

Enclosure estimate_xi(const CurveModel& curve, const Weight& r, const ScaleBase& R, const RationalInterval& I0,
                      long q_max, int samples, mpfr_prec_t prec) {
  if (q_max < 1 || samples < 1) throw std::invalid_argument("estimate_xi: q_max and samples must be positive");
  const std::size_t n = curve.dim();
  std::vector<Rational> xs = xi_sample_points(I0, samples);
  std::vector<std::optional<Enclosure>> per_sample(xs.size());
  parallel_for(xs.size(), [&](std::size_t k) {
    std::optional<Enclosure> best;
    for (long j = 1; j <= 8 * q_max; ++j) {
      LatticeBasis b = orbit_lattice(curve, r, R, xs[k], make_rational(j, 8));
      Enclosure nrm = shortest_nonzero(b, prec).norm;
      best = best ? min(*best, nrm) : nrm;
    }
    per_sample[k] = std::move(best);
  });
  Enclosure xi = *per_sample[0];
  for (const auto& e : per_sample) xi = min(xi, *e);
  if (mpfr_sgn(xi.lo()) <= 0) throw Error(ErrorCode::DegenerateXi, "sampled shortest norm is not positive");
  Enclosure cap = Enclosure(Rational(static_cast<long>(n + 1)) * Rational(999999, 1000000), prec) /
                  exp(Enclosure(1L, prec));
  return min(xi, cap);
}

namespace {

Integer ceil_of(const Enclosure& x, const char* what) {
  mpfr_t t;
  mpfr_init2(t, x.precision());
  mpfr_ceil(t, x.lo());
  Integer lo;
  mpfr_get_z(lo.get_mpz_t(), t, MPFR_RNDN);
  mpfr_ceil(t, x.hi());
  Integer hi;
  mpfr_get_z(hi.get_mpz_t(), t, MPFR_RNDN);
  mpfr_clear(t);
  if (lo != hi) throw Error(ErrorCode::Undecidable, std::string("ceiling of ") + what + " straddles an integer");
  return lo;
}

}  // namespace

void compute_small_constants(ConstantSheet& s) {
  const mpfr_prec_t p = s.precision;
  const Rational n1(static_cast<long>(s.n + 1));
  Enclosure lam = log(Enclosure(n1, p) / s.xi) / (s.beta * Enclosure(s.weights.rn(), p));
  s.lambda1 = to_long_checked(ceil_of(lam, "ln((n+1)/xi)/(beta r_n)"));
  s.k1 = s.xi / Enclosure(n1, p) * exp(-(s.beta * Enclosure(Rational(s.lambda1), p)));
  Rational d1 = s.d1();
  Rational denom = 200 * Rational(static_cast<long>(s.n)) * (s.f0 + s.d_tail_max()) * (1 + d1) * (1 + d1);
  s.c_formula = pow(s.k1, 1 + s.weights.r1()) * Enclosure(d1 / denom, p) / s.R.power(Rational(4), p);
  mpfr_t lo;
  mpfr_init2(lo, 64);
  mpfr_set(lo, s.c_formula.lo(), MPFR_RNDD);
  s.c = mpfr_to_rational(lo);
  mpfr_clear(lo);
  if (s.c <= 0) throw Error(ErrorCode::RInadmissible, "c rounds to a non-positive value");
}

ConstantSheet derive_small_constants(ConstantSheet s) {
  compute_small_constants(s);
  const mpfr_prec_t p = s.precision;
  // k1^{1+r1} < R^{-lambda1}
  Enclosure lhs = pow(s.k1, 1 + s.weights.r1());
  Enclosure rhs = s.R.power(Rational(-s.lambda1), p);
  if (!lhs.certainly_less(rhs)) {
    if (rhs.certainly_less(lhs) || mpfr_equal_p(lhs.lo(), rhs.hi())) {
      throw Error(ErrorCode::RInadmissible, "k1^(1+r1) < R^(-lambda1) fails");
    }
    throw Error(ErrorCode::Undecidable, "k1^(1+r1) < R^(-lambda1) undecided at this precision");
  }
  // R > 1/|I0|
  Rational inv_len = 1 / s.I0.length();
  auto c1 = s.R.compare_power(Rational(1), inv_len, p);
  if (!c1) throw Error(ErrorCode::Undecidable, "R > 1/|I0| undecided at this precision");
  if (*c1 <= 0) throw Error(ErrorCode::RInadmissible, "R > 1/|I0| fails (1/|I0| = " + to_string(inv_len) + ")");
  // R^alpha >= 21 C^2
  auto c2 = s.R.compare_power(s.alpha, 21 * s.C * s.C, p);
  if (!c2) throw Error(ErrorCode::Undecidable, "R^alpha >= 21C^2 undecided at this precision");
  if (*c2 < 0) throw Error(ErrorCode::RInadmissible, "R^alpha >= 21C^2 fails for R = " + s.R.describe());
  return s;
}

ConstantSheet derive_constants(const ConstantInputs& in) {
  if (!in.curve || !in.shift) throw std::invalid_argument("derive_constants: curve and shift required");
  const std::size_t n = in.curve->dim();
  if (in.shift->dim() != n) throw Error(ErrorCode::DimensionMismatch, "shift and curve dimensions differ");
  mpfr_prec_t prec = in.precision;
  for (int attempt = 0; attempt <= 4; ++attempt, prec *= 2) {
    try {
      ConstantSheet s;
      s.R = in.R;
      s.weights = in.weights;
      s.n = n;
      Exponents e = derive_exponents(in.R, in.weights, n, prec);
      s.beta_units = e.beta_units;
      s.beta_prime_units = e.beta_prime_units;
      s.epsilon = e.epsilon;
      s.beta = e.beta;
      s.beta_prime = e.beta_prime;
      s.I0 = in.I0;
      s.C = in.measure.C;
      s.alpha = in.measure.alpha;
      s.precision = prec;
      s.xi_depth = in.xi_depth;
      s.xi_samples = in.xi_samples;
      RationalInterval hull = in.I0.dilate(Rational(pow3(n + 1)));
      s.f0 = in.curve->derivative_envelope(hull);
      s.d = in.shift->lipschitz;
      s.xi = estimate_xi(*in.curve, in.weights, in.R, in.I0, in.xi_depth, in.xi_samples, prec);
      return derive_small_constants(std::move(s));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::Undecidable) throw;
    }
  }
  throw Error(ErrorCode::PrecisionExhausted, "constants undecided after four precision doublings");
}

}  // namespace badcantor
