#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "roompass/geometry.hpp"

namespace roompass {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full description of one convergence study.  Presets fill it for the
/// four limit regimes; a config file can override any field.
struct StudyConfig {
  std::string preset;

  BaseDomain base{1.0, 1.0};
  ShapeSpec shape{};

  // power-law family; explicit per-eps parameter lists may replace it
  std::optional<double> alpha, beta;
  std::vector<double> eps_list;
  std::vector<PerturbationParams> explicit_params;
  // declared limits, required when explicit parameters carry no exponents
  std::optional<double> q_limit;  // infinity encoded as "inf" in config text
  std::optional<double> r_limit;

  double lambda = 30.0;
  std::vector<double> mesh_h;  // one per eps, or a single entry for all
  double sigma0_h = 1.0 / 64.0;
  int sigma0_max_refine = 2;

  double tolerance = 1e-9;
  double fem_slack = 0.05;       // threshold slack at h = 1/64, scales with h
  double q_window = 1e-2;
  double aspect_limit = 8.0;
  double smallness_threshold = 1.0;
  std::size_t vertex_budget = 2'000'000;
  std::string out_dir;

  PerturbationParams params_for(std::size_t j) const;
  double mesh_h_for(std::size_t j) const;
  RegimeClass regime() const;

  void validate() const;  // throws ConfigError
};

/// Flat key-value text: `key = value`, `#` comments, lists as
/// `[a, b, c]`.  Unknown keys and malformed values raise ConfigError with
/// the line number.  Parsed values override `start`.
StudyConfig parse_config(const std::string& text, StudyConfig start = {});

/// Built-in reproductions of the four limit regimes.
StudyConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace roompass
