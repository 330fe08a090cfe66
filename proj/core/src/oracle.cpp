#include "badcantor/oracle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "badcantor/dangerous.hpp"

namespace badcantor {

std::string PowerValue::decimal(int digits) const {
  if (is_zero()) return "0";
  Enclosure v = Enclosure(factor, kDefaultPrecision) * pow(Enclosure(base, kDefaultPrecision), exponent);
  return v.decimal(digits);
}

int compare(const PowerValue& a, const PowerValue& b) {
  if (a.is_zero() || b.is_zero()) return (a.is_zero() ? 0 : 1) - (b.is_zero() ? 0 : 1);
  Integer da(a.exponent.get_den()), db(b.exponent.get_den());
  Integer L;
  mpz_lcm(L.get_mpz_t(), da.get_mpz_t(), db.get_mpz_t());
  const unsigned long l = to_ulong_checked(L);
  const unsigned long ka = to_ulong_checked(Integer(a.exponent * L));
  const unsigned long kb = to_ulong_checked(Integer(b.exponent * L));
  Rational lhs = ipow(a.factor, l) * ipow(a.base, ka);
  Rational rhs = ipow(b.factor, l) * ipow(b.base, kb);
  return cmp(lhs, rhs) < 0 ? -1 : (lhs == rhs ? 0 : 1);
}

namespace {

Quality quality_from(const std::vector<Rational>& phi, const std::vector<Rational>& theta, const Weight& r,
                     const Integer& m) {
  Quality out;
  const Rational am = Rational(abs(Rational(m)));
  for (std::size_t i = 0; i < phi.size(); ++i) {
    Rational t = Rational(m) * phi[i] - theta[i];
    out.p.push_back(nearest_integer(t));
    PowerValue v{am, dist_to_integer(t), 1 / r[i]};
    if (i == 0 || compare(v, out.value) > 0) {
      out.value = v;
      out.worst_i = i;
    }
  }
  return out;
}

void point_values(const CurveModel& curve, const ShiftField& shift, const Rational& x, std::vector<Rational>& phi,
                  std::vector<Rational>& theta) {
  if (curve.dim() != shift.dim()) throw Error(ErrorCode::DimensionMismatch, "curve and shift dimensions differ");
  for (std::size_t i = 0; i < curve.dim(); ++i) {
    phi.push_back(curve.value(i, x));
    theta.push_back(shift.value(i, x));
  }
}

}  // namespace

Quality quality(const CurveModel& curve, const ShiftField& shift, const Weight& r, const Rational& x,
                const Integer& m) {
  if (m == 0) throw std::invalid_argument("quality: m must be nonzero");
  std::vector<Rational> phi, theta;
  point_values(curve, shift, x, phi, theta);
  return quality_from(phi, theta, r, m);
}

Estimate bad_constant_estimate(const CurveModel& curve, const ShiftField& shift, const Weight& r, const Rational& x,
                               long Q, long M0) {
  if (!(Q > M0 && M0 >= 0)) throw std::invalid_argument("bad_constant_estimate: need Q > M0 >= 0");
  std::vector<Rational> phi, theta;
  point_values(curve, shift, x, phi, theta);
  Estimate best;
  bool first = true;
  for (long a = M0 + 1; a <= Q; ++a) {
    for (long m : {a, -a}) {
      Quality q = quality_from(phi, theta, r, Integer(m));
      if (first || compare(q.value, best.value) < 0) {
        best.value = q.value;
        best.argmin = m;
        first = false;
      }
    }
  }
  return best;
}

std::vector<Integer> continued_fraction(const Rational& x) {
  std::vector<Integer> a;
  Integer num = x.get_num(), den = x.get_den();
  while (den != 0) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    a.push_back(q);
    Integer r = num - q * den;
    num = den;
    den = r;
  }
  return a;
}

std::optional<Rational> convergent_quality_min(const Rational& x, long Q, long M0) {
  auto a = continued_fraction(x);
  const std::size_t N = a.size();
  // Complete quotients x'_k = [a_k; a_{k+1}, ..., a_N].
  std::vector<Rational> tail(N);
  tail[N - 1] = a[N - 1];
  for (std::size_t k = N - 1; k-- > 0;) tail[k] = Rational(a[k]) + 1 / tail[k + 1];
  std::optional<Rational> best;
  Integer q_prev = 0, q = 1;  // q_{-1}, q_0
  for (std::size_t k = 0; k < N; ++k) {
    if (k > 0) {
      Integer next = a[k] * q + q_prev;
      q_prev = q;
      q = next;
    }
    if (q <= M0 || q > Q) continue;
    Rational v = (k + 1 < N) ? Rational(1 / (tail[k + 1] + make_rational(q_prev, q))) : Rational(0);
    if (!best || v < *best) best = v;
  }
  return best;
}

Rational sqrt_approximation(unsigned long k, unsigned bits) {
  Integer s = Integer(k) << (2 * bits);
  Integer root;
  mpz_sqrt(root.get_mpz_t(), s.get_mpz_t());
  return make_rational(root, Integer(1) << bits);
}

Rational golden_ratio_approximation(unsigned bits) { return (1 + sqrt_approximation(5, bits + 1)) / 2; }

std::vector<long> QualityReport::failing_m() const {
  std::vector<long> out;
  for (const auto& row : rows)
    if (!row.pass) out.push_back(row.m);
  return out;
}

QualityReport verify_certificate(const Certificate& cert, const CurveModel& curve, const ShiftField& shift) {
  const ConstantSheet& s = cert.sheet;
  auto broken = [](const std::string& what) { throw Error(ErrorCode::CertificateBroken, what); };
  if (cert.chain.size() != static_cast<std::size_t>(cert.q_max) + 1) broken("chain length differs from q_max + 1");
  if (!(cert.chain.front() == s.I0)) broken("chain does not start at I0");
  for (std::size_t g = 1; g < cert.chain.size(); ++g) {
    if (!cert.chain[g - 1].contains(cert.chain[g])) broken("chain not nested at generation " + std::to_string(g));
    Rational expect = s.I0.length() / Rational(ipow(s.R.R(), static_cast<unsigned long>(g)));
    if (cert.chain[g].length() != expect) broken("wrong interval length at generation " + std::to_string(g));
  }
  if (cert.floor_base != s.c / 4 || cert.floor_exp != 1 / s.weights.rn()) broken("floor does not match (c/4)^(1/r_n)");
  if (cert.m_floor != m_threshold(s)) broken("m floor does not match 17 d1 / |I0|");
  if (!(s.c > 0) || s.c > s.c_formula.lower_rational()) broken("c is not a lower bound of the c formula");
  const Rational e = 1 + s.weights.r1();
  const Rational top = 2 * s.c / s.I0.length() * Rational(ipow(s.R.R(), static_cast<unsigned long>(cert.q_max + 1)));
  if (cert.M_max >= 1 && compare_powers(Rational(cert.M_max), e, top, Rational(1)) >= 0) {
    broken("M_max violates the band inequality");
  }
  if (cert.M_max != covered_m_bound(s, cert.q_max)) broken("M_max is not the last fully processed band edge");

  QualityReport rep;
  if (!cert.chain.back().contains(cert.x_star)) {
    rep.defects.push_back("x* outside the final interval");
    rep.pass = false;
  }
  rep.x = cert.x_star;
  rep.m_floor = cert.m_floor;
  rep.M_max = cert.M_max;
  rep.floor = PowerValue{Rational(1), cert.floor_base, cert.floor_exp};
  std::vector<Rational> phi, theta;
  point_values(curve, shift, cert.x_star, phi, theta);
  const long m_lo = std::max(1L, to_long_checked(floor(cert.m_floor)) + 1);
  for (long m = m_lo; m <= cert.M_max; ++m) {
    Quality q = quality_from(phi, theta, s.weights, Integer(m));
    QualityRow row{m, q.worst_i, q.p, q.value, compare(q.value, rep.floor) >= 0};
    if (rep.rows.empty() || compare(row.value, rep.worst_value) < 0) {
      rep.worst_m = m;
      rep.worst_i = row.worst_i;
      rep.worst_value = row.value;
    }
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string render_report(const QualityReport& r) {
  std::ostringstream os;
  os << "verdict = " << (r.pass ? "pass" : "fail") << "\n";
  os << "x = " << to_string(r.x) << "\n";
  os << "m_range = (" << to_string(r.m_floor) << ", " << r.M_max << "]\n";
  os << "floor_base = " << to_string(r.floor.base) << "\n";
  os << "floor_exponent = " << to_string(r.floor.exponent) << "\n";
  os << "floor_decimal = " << r.floor.decimal(40) << "\n";
  os << "checked = " << r.rows.size() << "\n";
  if (!r.rows.empty()) {
    os << "worst_m = " << r.worst_m << "\n";
    os << "worst_i = " << r.worst_i + 1 << "\n";
    os << "worst_value = " << r.worst_value.decimal(40) << "\n";
  }
  auto failing = r.failing_m();
  for (const auto& d : r.defects) os << "defect = " << d << "\n";
  os << "failing_m =";
  if (failing.empty()) os << " none";
  for (long m : failing) os << " " << m;
  os << "\n";
  os << "m,i,p,base,exponent,quality,pass\n";
  for (const auto& row : r.rows) {
    os << row.m << "," << row.worst_i + 1 << ",";
    for (std::size_t k = 0; k < row.p.size(); ++k) os << (k ? " " : "") << to_string(row.p[k]);
    os << "," << to_string(row.value.base) << "," << to_string(row.value.exponent) << "," << row.value.decimal(20)
       << "," << (row.pass ? "pass" : "fail") << "\n";
  }
  return os.str();
}

RationalMatrix transposed_system(const RationalMatrix& L) { return transpose(inverse(L)); }

namespace {

Rational form(const std::vector<Rational>& row, const std::vector<Integer>& u) {
  Rational s = 0;
  for (std::size_t j = 0; j < u.size(); ++j) s += row[j] * Rational(u[j]);
  return s;
}

// Visits nonzero integer vectors with |v_j| <= box_j in lexicographic order until f returns true.
template <class F>
bool enumerate_box(const std::vector<Integer>& box, F&& f) {
  std::vector<Integer> v(box.size());
  for (std::size_t j = 0; j < box.size(); ++j) v[j] = -box[j];
  for (;;) {
    bool zero = std::all_of(v.begin(), v.end(), [](const Integer& t) { return t == 0; });
    if (!zero && f(v)) return true;
    std::size_t j = box.size();
    while (j > 0) {
      --j;
      if (v[j] < box[j]) {
        ++v[j];
        break;
      }
      v[j] = -box[j];
      if (j == 0) return false;
    }
    if (box.empty()) return false;
  }
}

void check_instance(const TransferInstance& inst) {
  const std::size_t k = inst.n + 1;
  if (inst.n < 1 || inst.L.size() != k || inst.T.size() != k)
    throw Error(ErrorCode::DimensionMismatch, "transfer instance needs n+1 forms and n+1 bounds");
  for (const auto& row : inst.L)
    if (row.size() != k) throw Error(ErrorCode::DimensionMismatch, "forms must have n+1 coefficients");
  for (const auto& t : inst.T)
    if (t <= 0) throw Error(ErrorCode::NonPositiveEntry, "bounds T_i must be positive");
}

}  // namespace

std::vector<Integer> dual_box(const TransferInstance& inst) {
  check_instance(inst);
  const std::size_t k = inst.n + 1;
  Rational d = determinant(inst.L);
  if (d == 0) throw Error(ErrorCode::Degenerate, "forms have zero determinant");
  Rational iota_n = 1;
  for (const auto& t : inst.T) iota_n *= t;
  iota_n /= abs(d);
  Rational iota_up = ceil_power_dyadic(iota_n, Rational(1, static_cast<long>(inst.n)), 64);
  std::vector<Rational> b(k);
  b[0] = Rational(static_cast<long>(inst.n)) * iota_up / inst.T[0];
  for (std::size_t i = 1; i < k; ++i) b[i] = iota_up / inst.T[i];
  std::vector<Integer> box(k);
  for (std::size_t j = 0; j < k; ++j) {
    Rational s = 0;
    for (std::size_t i = 0; i < k; ++i) s += abs(inst.L[i][j]) * b[i];
    box[j] = floor(s);
  }
  return box;
}

TransferInstance planted_transfer_instance(std::mt19937_64& rng, std::size_t n) {
  const std::size_t k = n + 1;
  std::uniform_int_distribution<int> entry(-6, 6), coord(-3, 3), slack(0, 4);
  TransferInstance inst;
  inst.n = n;
  do {
    inst.L.assign(k, std::vector<Rational>(k));
    for (auto& row : inst.L)
      for (auto& a : row) a = make_rational(entry(rng), 2);
  } while (determinant(inst.L) == 0);
  std::vector<Integer> u(k);
  do {
    for (auto& x : u) x = coord(rng);
  } while (std::all_of(u.begin(), u.end(), [](const Integer& x) { return x == 0; }));
  inst.T.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    Rational value = abs(form(inst.L[i], u));
    inst.T[i] = (value == 0 ? Rational(1, 4) : value) + make_rational(slack(rng), 4);
  }
  return inst;
}

TransferReport transference_check(const TransferInstance& inst, long B) {
  check_instance(inst);
  if (B < 1) throw std::invalid_argument("transference_check: B must be positive");
  const std::size_t k = inst.n + 1;
  TransferReport rep;
  rep.determinant = determinant(inst.L);
  if (rep.determinant == 0) throw Error(ErrorCode::Degenerate, "forms have zero determinant");
  rep.iota_pow_n = 1;
  for (const auto& t : inst.T) rep.iota_pow_n *= t;
  rep.iota_pow_n /= abs(rep.determinant);

  std::vector<Integer> primal_box(k, Integer(B));
  bool found = enumerate_box(primal_box, [&](const std::vector<Integer>& u) {
    for (std::size_t i = 0; i < k; ++i)
      if (abs(form(inst.L[i], u)) > inst.T[i]) return false;
    rep.u = u;
    return true;
  });
  if (!found) throw Error(ErrorCode::NoPrimalSolution, "no primal solution in [-B,B]^{n+1}");

  rep.dual = transposed_system(inst.L);
  const Rational n(static_cast<long>(inst.n));
  const unsigned long np = inst.n;
  std::vector<Integer> box = dual_box(inst);
  found = enumerate_box(box, [&](const std::vector<Integer>& v) {
    // |L'_0| <= n iota / T_0 and |L'_i| <= iota / T_i, compared through n-th powers.
    for (std::size_t i = 0; i < k; ++i) {
      Rational lhs = abs(form(rep.dual[i], v)) * inst.T[i];
      if (i == 0) lhs /= n;
      if (ipow(lhs, np) > rep.iota_pow_n) return false;
    }
    rep.v = v;
    return true;
  });
  if (!found) throw Error(ErrorCode::SearchExhausted, "no dual solution in the search box");

  bool matrices = multiply(transpose(inst.L), rep.dual) == identity_matrix(k);
  Rational lhs = 0, rhs = 0;
  for (std::size_t i = 0; i < k; ++i) {
    lhs += form(inst.L[i], rep.u) * form(rep.dual[i], rep.v);
    rhs += Rational(rep.u[i] * rep.v[i]);
  }
  rep.identity_holds = matrices && lhs == rhs;
  return rep;
}

namespace {

// Trees of alive cells up to sibling order, interned: a shape is a sorted list of child shape ids.
struct Search {
  unsigned R;
  const std::vector<std::vector<long>>& h;
  std::size_t budget;
  std::size_t states = 0;
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> kids;
  std::map<std::pair<int, long>, long> memo, leaves;

  struct Option {
    int shape;  // -1: subtree died out
    long overflow;
  };

  void spend(std::size_t k) {
    states += k;
    if (states > budget) throw std::length_error("survivor search budget exceeded");
  }

  int intern(std::vector<int> ks) {
    std::sort(ks.begin(), ks.end());
    auto [it, fresh] = ids.emplace(ks, static_cast<int>(kids.size()));
    if (fresh) kids.push_back(std::move(ks));
    return it->second;
  }

  // Removals at step q inside `node` (a generation-d cell); overflow is what the node's own cap cannot absorb.
  std::vector<Option> options(int node, long d, long q, std::map<std::pair<int, long>, std::vector<Option>>& cache) {
    auto key = std::make_pair(node, d);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    std::vector<Option> out;
    const long cap = h[q][d];
    long above = 0;
    for (long e = 0; e < d; ++e) above += h[q][e];
    if (d == q) {
      const int leaf = intern({});
      for (long kill = std::min<long>(R, cap); kill <= static_cast<long>(R); ++kill) {
        long overflow = std::max(0L, kill - cap);
        if (overflow > above) break;
        out.push_back({kill == static_cast<long>(R) ? -1 : intern(std::vector<int>(R - kill, leaf)), overflow});
      }
    } else {
      std::set<std::pair<std::vector<int>, long>> partial{{{}, 0}};
      for (int kid : std::vector<int>(kids[node])) {
        auto kid_opts = options(kid, d + 1, q, cache);
        std::set<std::pair<std::vector<int>, long>> next;
        for (const auto& [alive, ov] : partial) {
          for (const auto& o : kid_opts) {
            long total = ov + o.overflow;
            if (total - cap > above) continue;
            std::vector<int> a = alive;
            if (o.shape >= 0) a.insert(std::upper_bound(a.begin(), a.end(), o.shape), o.shape);
            next.emplace(std::move(a), total);
          }
        }
        spend(next.size());
        partial = std::move(next);
      }
      for (const auto& [alive, ov] : partial)
        out.push_back({alive.empty() ? -1 : intern(alive), std::max(0L, ov - cap)});
    }
    cache.emplace(key, out);
    return out;
  }

  long leaves_at(int s, long depth) {
    if (depth == 0) return 1;
    auto key = std::make_pair(s, depth);
    if (auto it = leaves.find(key); it != leaves.end()) return it->second;
    long n = 0;
    for (int k : std::vector<int>(kids[s])) n += leaves_at(k, depth - 1);
    leaves.emplace(key, n);
    return n;
  }

  long solve(int root, long q) {
    const long D = static_cast<long>(h.size());
    if (q == D) return leaves_at(root, D);
    auto key = std::make_pair(root, q);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::map<std::pair<int, long>, std::vector<Option>> cache;
    auto opts = options(root, 0, q, cache);
    long best = -1;
    for (const auto& o : opts) {
      if (o.overflow != 0) continue;
      long v = o.shape >= 0 ? solve(o.shape, q + 1) : 0;
      if (best < 0 || v < best) best = v;
    }
    memo.emplace(key, best);
    return best;
  }
};

}  // namespace

std::optional<long> min_survivors_exhaustive(unsigned R, const std::vector<std::vector<long>>& h, std::size_t budget) {
  if (R < 2) throw std::invalid_argument("R must be at least 2");
  for (std::size_t q = 0; q < h.size(); ++q)
    if (h[q].size() != q + 1) throw Error(ErrorCode::DimensionMismatch, "ledger row q needs q+1 entries");
  Search s{R, h, budget, 0, {}, {}, {}, {}};
  try {
    return s.solve(s.intern({}), 0);
  } catch (const std::length_error&) {
    return std::nullopt;
  }
}

Rational recursion_survivor_bound(unsigned R, const std::vector<std::vector<long>>& h) {
  SurvivorReport rep = survivor_counts(h, Integer(R));
  if (!rep.positive) return 0;
  Rational prod = 1;
  for (const auto& t : rep.t) prod *= *t;
  return prod;
}

}  // namespace badcantor
