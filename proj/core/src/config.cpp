#include "badcantor/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace badcantor {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"curve", "", "phi_1; ...; phi_n as ascending num/den coefficients (phi_1 = x)"},
      {"shift", "", "theta_1; ...; theta_n as ascending num/den coefficients"},
      {"weights", "", "r_1 ... r_n"},
      {"domain", "", "open interval U as 'left right'"},
      {"center", "", "x0 inside U (default: midpoint of U)"},
      {"I0", "", "explicit base interval 'left right'"},
      {"R", "32", "partition arity"},
      {"q_max", "8", "generations to construct"},
      {"measure", "lebesgue", "measure oracle (lebesgue)"},
      {"rho0", "1", "Ahlfors radius bound"},
      {"precision", "128", "starting precision in bits"},
      {"xi_samples", "9", "x samples for the xi estimate"},
      {"xi_depth", "", "t range of the xi estimate (default q_max)"},
      {"beam", "256", "parents expanded per generation before backtracking"},
      {"escape_removal", "on", "remove lattice-escape cells (on/off)"},
      {"escape_samples", "9", "sample points per escape test"},
      {"output", "", "output path (default stdout)"},
      {"certificate", "", "certificate path for verify/oracle"},
      {"oracle_x", "", "point for the oracle subcommand"},
      {"oracle_Q", "100000", "largest |m| for the oracle"},
      {"oracle_M0", "0", "oracle range is M0 < |m| <= Q"},
      {"transfer_count", "500", "systems in transfer-test"},
      {"transfer_seed", "1", "seed for transfer-test"},
      {"transfer_B", "5", "primal search box for transfer-test"},
      {"probe_samples", "9", "x samples for lattice-probe"},
      {"probe_t_step", "1/8", "t step for lattice-probe"},
      {"probe_t_max", "", "largest t for lattice-probe (default q_max)"},
  };
  return keys;
}

namespace {

const ConfigKey* find_key(std::string_view name) {
  for (const auto& k : config_keys())
    if (k.name == name) return &k;
  return nullptr;
}

std::string trim(std::string_view s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string_view::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r");
  return std::string(s.substr(a, b - a + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::istringstream is{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(number) + ": expected key = value");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!find_key(key)) throw Error(ErrorCode::ConfigError, "line " + std::to_string(number) + ": unknown key '" + key + "'");
    if (cfg.values.count(key)) {
      throw Error(ErrorCode::ConfigError, "line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
    cfg.values[key] = value;
    cfg.lines[key] = number;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void merge_flags(RunConfig& cfg, const std::map<std::string, std::string>& flags) {
  for (const auto& [k, v] : flags) {
    if (!find_key(k)) throw Error(ErrorCode::ConfigError, "unknown flag --" + k);
    auto it = cfg.values.find(k);
    if (it == cfg.values.end()) {
      cfg.values[k] = v;
    } else if (it->second != v) {
      cfg.warnings.push_back("--" + k + " ignored: config file sets " + k + " = " + it->second);
    }
  }
}

bool RunConfig::has(const std::string& key) const { return values.count(key) > 0; }

std::string RunConfig::text(const std::string& key) const {
  if (auto it = values.find(key); it != values.end()) return it->second;
  const ConfigKey* k = find_key(key);
  if (!k) throw std::logic_error("unregistered config key " + key);
  if (k->fallback.empty()) throw Error(ErrorCode::ConfigError, "missing required field '" + key + "'");
  return std::string(k->fallback);
}

namespace {

template <class F>
auto field(const RunConfig& cfg, const std::string& key, F&& f) {
  std::string raw = cfg.text(key);
  try {
    return f(raw);
  } catch (const std::exception& e) {
    std::string where = cfg.lines.count(key) ? "line " + std::to_string(cfg.lines.at(key)) + ", " : "";
    throw Error(ErrorCode::ConfigError, where + "field '" + key + "': " + e.what());
  }
}

}  // namespace

long RunConfig::integer(const std::string& key) const {
  return field(*this, key, [](const std::string& s) { return to_long_checked(parse_integer(s)); });
}

Rational RunConfig::rational(const std::string& key) const {
  return field(*this, key, [](const std::string& s) { return parse_rational(s); });
}

bool RunConfig::flag(const std::string& key) const {
  return field(*this, key, [](const std::string& s) {
    if (s == "on" || s == "true" || s == "1") return true;
    if (s == "off" || s == "false" || s == "0") return false;
    throw std::invalid_argument("expected on/off, got '" + s + "'");
  });
}

std::vector<Rational> RunConfig::rationals(const std::string& key) const {
  return field(*this, key, [](const std::string& s) {
    std::vector<Rational> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(parse_rational(tok));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
  });
}

std::vector<Polynomial> RunConfig::polynomials(const std::string& key) const {
  return field(*this, key, [](const std::string& s) {
    std::vector<Polynomial> out;
    for (const auto& part : split(s, ';')) out.push_back(Polynomial::parse(part));
    return out;
  });
}

std::string canonical_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, v] : cfg.values)
    if (k != "output") out += k + " = " + v + "\n";
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_text(cfg))));
  return buf;
}

namespace {

RationalInterval interval_field(const RunConfig& cfg, const std::string& key) {
  auto v = cfg.rationals(key);
  if (v.size() != 2) throw Error(ErrorCode::ConfigError, "field '" + key + "': expected 'left right'");
  return RationalInterval(v[0], v[1]);
}

}  // namespace

Problem build_problem(const RunConfig& cfg) {
  if (cfg.text("measure") != "lebesgue") {
    throw Error(ErrorCode::ConfigError, "field 'measure': only lebesgue is available");
  }
  Problem p;
  auto raw_weights = cfg.rationals("weights");
  p.weights = validate_weights(raw_weights);
  if (raw_weights != p.weights.entries()) {
    throw Error(ErrorCode::ConfigError, "field 'weights': list r_1 >= ... >= r_n in the order of the curve components");
  }
  p.curve = build_curve(cfg.polynomials("curve"), interval_field(cfg, "domain"));
  if (p.weights.dim() != p.curve.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "weights has " + std::to_string(p.weights.dim()) +
                                                  " entries, curve has " + std::to_string(p.curve.dim()));
  }
  p.R = Integer(cfg.integer("R"));
  p.measure = MeasureOracle::lebesgue(cfg.rational("rho0"));
  if (cfg.has("I0")) {
    p.I0 = interval_field(cfg, "I0");
  } else {
    std::optional<Rational> center;
    if (cfg.has("center")) center = cfg.rational("center");
    p.I0 = select_base_interval(p.curve, p.R, p.measure, center);
  }
  auto shift = cfg.polynomials("shift");
  if (shift.size() != p.curve.dim()) throw Error(ErrorCode::DimensionMismatch, "shift and curve dimensions differ");
  p.shift = build_shift(std::move(shift), p.I0.dilate(Rational(pow3(p.curve.dim() + 1))));
  return p;
}

EngineOptions engine_options(const RunConfig& cfg) {
  EngineOptions o;
  long beam = cfg.integer("beam");
  long samples = cfg.integer("escape_samples");
  if (beam < 1) throw Error(ErrorCode::ConfigError, "field 'beam': must be positive");
  if (samples < 1) throw Error(ErrorCode::ConfigError, "field 'escape_samples': must be positive");
  o.beam = static_cast<std::size_t>(beam);
  o.escape_samples = static_cast<int>(samples);
  o.escape_tests = cfg.flag("escape_removal");
  return o;
}

}  // namespace badcantor
