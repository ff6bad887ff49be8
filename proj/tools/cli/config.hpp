#pragma once

// Job configuration: one JSON document, validated before any computation.
// Unknown keys are errors; diagnostics name the offending field.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <riemobs/observer.hpp>
#include <riemobs/recipe.hpp>

#include "cli/defaults.hpp"

namespace riemobs::cli {

struct SimulationBlock {
  std::optional<Vec> x0;
  std::optional<Vec> xhat0;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<int> sample_every;
  std::optional<double> basin;
  std::optional<double> rate;
  /// Constant k_E; unset means scan.
  std::optional<double> gain;
  DistanceMethod distance = DistanceMethod::Geodesic;
};

struct GeodesicBlock {
  std::optional<Vec> from;
  std::optional<Vec> to;
  std::optional<Vec> velocity;
  double length = Defaults::geodesic_length;
  /// Constant metric; overrides the benchmark metric.
  std::optional<Mat> metric;
  /// "ex8": pull the metric back to (y, xi) coordinates.
  std::string chart;
};

struct JobConfig {
  std::string benchmark = "oscillator";
  double epsilon = Defaults::epsilon;
  /// Empty base means the benchmark's default metric.
  MetricRecipe metric;
  std::vector<std::string> conditions;
  std::uint64_t seed = Defaults::seed;
  int samples = Defaults::samples;
  int trials = Defaults::direct_trials;
  double reach = Defaults::direct_reach;
  std::optional<double> tol;
  std::optional<double> q_min;
  SimulationBlock simulation;
  GeodesicBlock geodesic;
  std::string out = ".";
};

/// Parses and validates a config document. Throws Error(ConfigError) with
/// "line L" for syntax errors and "field a.b.c" for schema errors.
JobConfig parse_config(const std::string& text);
JobConfig load_config(const std::string& path);

/// Polynomial from [{"coeff": c, "exponents": [..]}, ...].
Polynomial parse_polynomial(const std::string& json_text, int nvars);

/// Metric name used when the config does not pick one.
std::string default_metric(const std::string& benchmark);

bool known_condition(const std::string& name);

}  // namespace riemobs::cli
