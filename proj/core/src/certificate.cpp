#include "badcantor/certificate.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace badcantor {

std::string decimal_string(const Rational& x) { return Enclosure(x, 256).decimal(40); }

namespace {

constexpr std::string_view kLedgerHeader =
    "q,parents,children,removed_measure,removed_lattice,removed_dangerous,windows_hitting,max_distinct_v,"
    "max_j_per_v,t,h_prime,h_measure,h_lattice,f";

std::string join(const std::vector<long>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

std::string join(const std::vector<Rational>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + to_string(v[i]);
  return out;
}

std::string join(const std::vector<Polynomial>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " ; " : "") + v[i].serialize();
  return out;
}

std::string interval_text(const RationalInterval& I) { return to_string(I.left) + " " + to_string(I.right); }

void kv(std::ostream& os, std::string_view key, const std::string& value) { os << key << " = " << value << "\n"; }

void enclosure_kv(std::ostream& os, std::string_view key, const Enclosure& e) {
  kv(os, key, e.decimal(40));
  kv(os, std::string(key) + ".lo", to_string(e.lower_rational()));
  kv(os, std::string(key) + ".hi", to_string(e.upper_rational()));
}

}  // namespace

std::string serialize_certificate(const Certificate& c) {
  const ConstantSheet& s = c.sheet;
  std::ostringstream os;
  os << "[header]\n";
  kv(os, "version", c.version);
  kv(os, "config_hash", c.config_hash);
  os << "[problem]\n";
  kv(os, "domain", interval_text(c.domain));
  kv(os, "curve", join(c.curve));
  kv(os, "shift", join(c.shift));
  os << "[constants]\n";
  kv(os, "R", s.R.R().get_str());
  kv(os, "weights", join(s.weights.entries()));
  kv(os, "n", std::to_string(s.n));
  kv(os, "I0", interval_text(s.I0));
  kv(os, "precision", std::to_string(s.precision));
  kv(os, "epsilon", to_string(s.epsilon));
  kv(os, "beta_units", to_string(s.beta_units));
  kv(os, "beta_prime_units", to_string(s.beta_prime_units));
  enclosure_kv(os, "beta", s.beta);
  enclosure_kv(os, "beta_prime", s.beta_prime);
  enclosure_kv(os, "xi", s.xi);
  kv(os, "xi_depth", std::to_string(s.xi_depth));
  kv(os, "xi_samples", std::to_string(s.xi_samples));
  kv(os, "lambda1", std::to_string(s.lambda1));
  enclosure_kv(os, "k1", s.k1);
  kv(os, "f0", to_string(s.f0));
  kv(os, "d", join(s.d));
  enclosure_kv(os, "c_formula", s.c_formula);
  kv(os, "c", to_string(s.c));
  kv(os, "c.decimal", decimal_string(s.c));
  kv(os, "C", to_string(s.C));
  kv(os, "alpha", to_string(s.alpha));
  os << "[chain]\n";
  for (const auto& I : c.chain) os << interval_text(I) << "\n";
  os << "[point]\n";
  kv(os, "x_star", to_string(c.x_star));
  kv(os, "x_star.decimal", decimal_string(c.x_star));
  kv(os, "q_max", std::to_string(c.q_max));
  kv(os, "M_max", std::to_string(c.M_max));
  kv(os, "m_floor", to_string(c.m_floor));
  os << "[ledger]\n" << kLedgerHeader << "\n";
  for (std::size_t q = 0; q < c.ledger.size(); ++q) {
    const LedgerRow& r = c.ledger[q];
    std::string t = q < c.t.size() && c.t[q] ? to_string(*c.t[q]) : "n/a";
    os << r.q << "," << r.parents << "," << r.children << "," << r.removed_measure << "," << r.removed_lattice << ","
       << r.removed_dangerous << "," << r.windows_hitting << "," << r.max_distinct_v << "," << r.max_j_per_v << ","
       << t << "," << join(r.h_prime) << "," << join(r.h_measure) << "," << join(r.h_lattice) << "," << join(r.f)
       << "\n";
  }
  os << "[windows]\n";
  for (const auto& r : c.ledger) kv(os, std::to_string(r.q), std::to_string(r.windows));
  os << "[floor]\n";
  kv(os, "base", to_string(c.floor_base));
  kv(os, "exponent", to_string(c.floor_exp));
  kv(os, "decimal", c.floor_decimal);
  kv(os, "status", c.status);
  kv(os, "expectation_failures", std::to_string(c.expectation_failures));
  if (c.report) os << "[report]\n" << *c.report;
  return os.str();
}

namespace {

struct Sections {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> lines;
};

Sections split_sections(std::string_view text) {
  Sections out;
  std::istringstream is{std::string(text)};
  std::string line, current;
  while (std::getline(is, line)) {
    if (current != "report" && line.size() > 2 && line.front() == '[' && line.back() == ']') {
      current = line.substr(1, line.size() - 2);
      if (out.lines.count(current)) throw Error(ErrorCode::ParseError, "duplicate section [" + current + "]");
      out.order.push_back(current);
      out.lines[current];
      continue;
    }
    if (current.empty()) {
      if (!line.empty()) throw Error(ErrorCode::ParseError, "text before the first section");
      continue;
    }
    out.lines[current].push_back(line);
  }
  return out;
}

class KeyValues {
 public:
  KeyValues(const Sections& s, const std::string& name) : name_(name) {
    auto it = s.lines.find(name);
    if (it == s.lines.end()) throw Error(ErrorCode::ParseError, "missing section [" + name + "]");
    for (const auto& line : it->second) {
      auto eq = line.find(" = ");
      if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "[" + name + "]: malformed line '" + line + "'");
      map_[line.substr(0, eq)] = line.substr(eq + 3);
    }
  }
  const std::string& get(const std::string& key) const {
    auto it = map_.find(key);
    if (it == map_.end()) throw Error(ErrorCode::ParseError, "[" + name_ + "]: missing " + key);
    return it->second;
  }
  Rational rational(const std::string& key) const { return parse_rational(get(key)); }
  long integer(const std::string& key) const { return to_long_checked(parse_integer(get(key))); }
  std::vector<Rational> rationals(const std::string& key) const {
    std::vector<Rational> out;
    std::istringstream is(get(key));
    std::string tok;
    while (is >> tok) out.push_back(parse_rational(tok));
    return out;
  }
  RationalInterval interval(const std::string& key) const {
    auto v = rationals(key);
    if (v.size() != 2) throw Error(ErrorCode::ParseError, "[" + name_ + "]: " + key + " needs two endpoints");
    return RationalInterval(v[0], v[1]);
  }
  Enclosure enclosure(const std::string& key, mpfr_prec_t prec) const {
    return Enclosure::hull(rational(key + ".lo"), rational(key + ".hi"), prec);
  }
  std::vector<Polynomial> polynomials(const std::string& key) const {
    std::vector<Polynomial> out;
    std::istringstream is(get(key));
    std::string part;
    while (std::getline(is, part, ';')) out.push_back(Polynomial::parse(part));
    return out;
  }

 private:
  std::string name_;
  std::map<std::string, std::string> map_;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::vector<long> longs(const std::string& s) {
  std::vector<long> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(to_long_checked(parse_integer(tok)));
  return out;
}

}  // namespace

Certificate parse_certificate(std::string_view text) {
  Sections sec = split_sections(text);
  Certificate c;
  KeyValues header(sec, "header");
  c.version = header.get("version");
  c.config_hash = header.get("config_hash");

  KeyValues problem(sec, "problem");
  c.domain = problem.interval("domain");
  c.curve = problem.polynomials("curve");
  c.shift = problem.polynomials("shift");

  KeyValues k(sec, "constants");
  ConstantSheet& s = c.sheet;
  s.R = ScaleBase::integer(parse_integer(k.get("R")));
  s.weights = validate_weights(k.rationals("weights"));
  s.n = static_cast<std::size_t>(k.integer("n"));
  s.I0 = k.interval("I0");
  s.precision = static_cast<mpfr_prec_t>(k.integer("precision"));
  s.epsilon = k.rational("epsilon");
  s.beta_units = k.rational("beta_units");
  s.beta_prime_units = k.rational("beta_prime_units");
  s.beta = k.enclosure("beta", s.precision);
  s.beta_prime = k.enclosure("beta_prime", s.precision);
  s.xi = k.enclosure("xi", s.precision);
  s.xi_depth = k.integer("xi_depth");
  s.xi_samples = static_cast<int>(k.integer("xi_samples"));
  s.lambda1 = k.integer("lambda1");
  s.k1 = k.enclosure("k1", s.precision);
  s.f0 = k.rational("f0");
  s.d = k.rationals("d");
  s.c_formula = k.enclosure("c_formula", s.precision);
  s.c = k.rational("c");
  s.C = k.rational("C");
  s.alpha = k.rational("alpha");

  if (!sec.lines.count("chain")) throw Error(ErrorCode::ParseError, "missing section [chain]");
  for (const auto& line : sec.lines.at("chain")) {
    std::istringstream is(line);
    std::string a, b;
    if (!(is >> a >> b)) throw Error(ErrorCode::ParseError, "[chain]: malformed interval '" + line + "'");
    c.chain.emplace_back(parse_rational(a), parse_rational(b));
  }

  KeyValues point(sec, "point");
  c.x_star = point.rational("x_star");
  c.q_max = point.integer("q_max");
  c.M_max = point.integer("M_max");
  c.m_floor = point.rational("m_floor");

  if (!sec.lines.count("ledger")) throw Error(ErrorCode::ParseError, "missing section [ledger]");
  const auto& rows = sec.lines.at("ledger");
  if (rows.empty() || rows.front() != kLedgerHeader) throw Error(ErrorCode::ParseError, "[ledger]: bad header");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    auto f = split_csv(rows[i]);
    if (f.size() != 14) throw Error(ErrorCode::ParseError, "[ledger]: row " + std::to_string(i) + " needs 14 fields");
    LedgerRow r;
    r.q = to_long_checked(parse_integer(f[0]));
    r.parents = to_long_checked(parse_integer(f[1]));
    r.children = to_long_checked(parse_integer(f[2]));
    r.removed_measure = to_long_checked(parse_integer(f[3]));
    r.removed_lattice = to_long_checked(parse_integer(f[4]));
    r.removed_dangerous = to_long_checked(parse_integer(f[5]));
    r.windows_hitting = to_long_checked(parse_integer(f[6]));
    r.max_distinct_v = to_long_checked(parse_integer(f[7]));
    r.max_j_per_v = to_long_checked(parse_integer(f[8]));
    c.t.push_back(f[9] == "n/a" ? std::nullopt : std::optional<Rational>(parse_rational(f[9])));
    r.h_prime = longs(f[10]);
    r.h_measure = longs(f[11]);
    r.h_lattice = longs(f[12]);
    r.f = longs(f[13]);
    c.ledger.push_back(std::move(r));
  }

  KeyValues windows(sec, "windows");
  for (auto& r : c.ledger) r.windows = windows.integer(std::to_string(r.q));

  KeyValues fl(sec, "floor");
  c.floor_base = fl.rational("base");
  c.floor_exp = fl.rational("exponent");
  c.floor_decimal = fl.get("decimal");
  c.status = fl.get("status");
  c.expectation_failures = fl.integer("expectation_failures");

  if (sec.lines.count("report")) {
    std::string body;
    for (const auto& line : sec.lines.at("report")) body += line + "\n";
    c.report = body;
  }
  return c;
}

Certificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read certificate " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_certificate(ss.str());
}

void save_certificate(const Certificate& cert, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write certificate " + path);
  out << serialize_certificate(cert);
}

}  // namespace badcantor
