#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "badcantor/cantor.hpp"
#include "badcantor/core.hpp"
#include "badcantor/polynomial.hpp"

namespace badcantor {

struct ConfigKey {
  std::string_view name;
  std::string_view fallback;  // empty: no default
  std::string_view help;
};

/// Every key accepted in a config file (and as a --flag).
const std::vector<ConfigKey>& config_keys();

/// Flat key = value settings; '#' starts a comment.
struct RunConfig {
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
  std::vector<std::string> warnings;

  bool has(const std::string& key) const;
  /// Value or the key's default; ConfigError when neither exists.
  std::string text(const std::string& key) const;
  long integer(const std::string& key) const;
  Rational rational(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<Rational> rationals(const std::string& key) const;
  /// ';'-separated polynomials, each as ascending "num/den" coefficients.
  std::vector<Polynomial> polynomials(const std::string& key) const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Flag values fill keys the file leaves unset; a conflicting flag is ignored with a warning.
void merge_flags(RunConfig& cfg, const std::map<std::string, std::string>& flags);

/// Sorted key = value lines of the explicitly set keys, output path excluded.
std::string canonical_text(const RunConfig& cfg);
/// 16 hex digits of FNV-1a over canonical_text.
std::string config_hash(const RunConfig& cfg);

/// Curve, shift, weights, R, measure and I0 assembled from a config.
struct Problem {
  CurveModel curve;
  ShiftField shift;
  Weight weights;
  Integer R;
  MeasureOracle measure;
  RationalInterval I0;
};

Problem build_problem(const RunConfig& cfg);
EngineOptions engine_options(const RunConfig& cfg);

}  // namespace badcantor
