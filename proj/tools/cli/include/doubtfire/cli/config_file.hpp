#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doubtfire/harness.hpp"

namespace doubtfire::cli {

/// A named criterion set plus the evaluation mode it runs in.
struct CriterionProfile {
  std::string name;
  CriterionSet set;
  EvaluationMode mode = EvaluationMode::Rigorous;
};

/// Parses pa_nan, dt, der, all-rigorous or all-lazy.
CriterionProfile parse_profile(const std::string& name);

struct CampaignOptions {
  std::uint32_t runs_per_point = 100;
  std::vector<double> errors{-1000, -100, -10, -1, 1, 10, 100, 1000};
  std::vector<CriterionProfile> profiles;
  std::vector<double> tol_dt_grid{0.0, 0.02};
  std::vector<double> tol_der_grid{0.0, 100.0, 10000.0};
};

struct Config {
  SimConfig sim;
  CampaignOptions campaign;
};

/// Defaults as used when no file is given: every profile in the sensitivity
/// table.
Config default_config();

/// Reads an INI file with sections [grid], [solver], [tolerances], [channel],
/// [faults], [cost], [run] and [campaign]. Unknown sections or keys are errors.
/// Throws ConfigError.
Config load_config(const std::string& path);
Config parse_config(const std::string& text);

/// Applies one "section.key=value" override. Throws ConfigError.
void apply_override(Config& config, const std::string& assignment);
void apply_setting(Config& config, const std::string& section, const std::string& key, const std::string& value);

/// Accepts decimal numbers plus nan, inf and -inf.
double parse_real(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// Canonical "section.key = value" listing of every setting; stable across runs.
std::string canonical_form(const Config& config);

/// 64-bit FNV-1a of canonical_form, in hex.
std::string config_digest(const Config& config);

}  // namespace doubtfire::cli
