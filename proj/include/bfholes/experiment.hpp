#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfholes/report.hpp"

namespace bfholes {

/// Keys of the JSON config are exactly these field names.
struct ExperimentConfig {
  std::string experiment = "hole_ladder";  // hole_ladder crowding_ladder growth_stats bounds_table audits omega_verify fit sample
  int m = 1;
  std::vector<double> r_values;
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::string sampler = "plain";  // plain | tilted
  // Tilt parameters: one value for every r, or one per r.
  std::vector<double> shift_alpha0{0.0};
  std::vector<double> band_scale{1.0};
  std::vector<int> band_cutoff{-1};  // -1: the proof-event cutoff
  bool symmetric_alpha0 = true;
  std::string band_profile = "flat";  // flat | envelope
  std::string kind;  // event / variant selector, experiment dependent
  double grid_step = 0.0;
  double delta = 0.25;
  std::optional<double> crowd_center;  // default r^2 / 2
  double spacing = 2.0;
  std::string lattice_variant = "symmetric";
  double epsilon = 1e-9;
  std::uint64_t oracle_trials = 100'000;
  std::string input;
  std::string out;
  std::string format = "csv";
  double fit_threshold = 1.0;
};

const std::vector<std::string>& config_keys();

/// Parses and validates; unknown keys and bad values raise ConfigError naming the keys.
ExperimentConfig parse_config(const std::string& json_text);
void validate_config(const ExperimentConfig& cfg);

/// Canonical JSON of every field except out (sorted keys); its FNV-1a hash is the config hash.
std::string canonical_config(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

struct ExperimentResult {
  Table table;
  std::string config_hash;
  double wall_clock_seconds = 0.0;
  std::vector<std::string> written;  // paths
};

/// Runs the configured experiment. Writes cfg.out (and its sidecar) when out is set.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Draw files produced by the `sample` experiment hold several draws back to back.
std::vector<CoefficientDraw> read_draws(const std::string& text);

}  // namespace bfholes
