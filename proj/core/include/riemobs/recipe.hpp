#pragma once

// Metric recipes: a declarative description of how to obtain a metric for a
// benchmark, either one of its built-in metrics, the P_mod repair of one, or
// a product metric from an output metric Q, a complementary map h_perp and
// a metric R.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "riemobs/catalog.hpp"

namespace riemobs {

struct MetricRecipe {
  std::string type = "builtin";  // builtin | pmod | product
  /// builtin: metric to use; pmod: metric to repair.
  std::string base;
  /// Constant output metric; defaults to the benchmark's Q.
  std::optional<Mat> q;
  /// Constant metric on the complementary space; product recipes default
  /// to the identity, or to the ex8 metric diag(1, 1 + a xi_1^2) when
  /// h_perp is the ex8 builtin.
  std::optional<Mat> r;
  /// Builtin complementary map: "ex8", "planar" or "circle".
  std::string h_perp_builtin;
  /// Alternatively, one polynomial per component of h_perp.
  std::vector<Polynomial> h_perp_poly;
  std::map<std::string, double> params;
};

NamedMetric build_from_recipe(const BenchmarkSpec& bench, const MetricRecipe& recipe);

}  // namespace riemobs
