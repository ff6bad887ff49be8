#pragma once

// Every numeric default the command-line tool falls back to. The README
// reproduces this table; keep the two in sync.

#include <cstdint>

namespace riemobs::cli {

struct Defaults {
  static constexpr double epsilon = 0.5;          // oscillator region parameter
  static constexpr std::uint64_t seed = 0;
  static constexpr int samples = 512;             // points per sampled check
  static constexpr int direct_trials = 200;       // geodesics for a3-direct
  static constexpr double direct_reach = 0.1;     // relative to the smallest box side
  static constexpr int direct_grid = 17;
  static constexpr double nullity_tol = 1e-8;
  static constexpr double submersion_tol = 1e-8;
  static constexpr double monotonicity_tol = 1e-8;
  static constexpr double q_min = 1e-6;           // a2 threshold unless the metric sets one
  static constexpr double envelope_slack = 1e-3;
  static constexpr int eigen_bound_samples = 512; // for the euclidean-bound distance
  static constexpr double geodesic_length = 1.0;  // s_end for point + velocity runs
  static constexpr int geodesic_steps = 64;       // initial step count for those runs
};

}  // namespace riemobs::cli
