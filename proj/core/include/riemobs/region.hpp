#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "riemobs/linalg.hpp"
#include "riemobs/smooth_map.hpp"

namespace riemobs {

/// A bounded sampling region: an axis-aligned box plus a membership
/// predicate for non-box sets. Samples are Halton points in the box that
/// pass the predicate, so the same seed always yields the same list.
struct Region {
  std::string name;
  Vec lo;
  Vec hi;
  std::function<bool(const Vec&)> member;

  static Region box(Vec lo, Vec hi, std::string name = "box");

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x) const;
  std::vector<Vec> sample(std::uint64_t seed, int count) const;
};

/// i-th element (1-based) of the van der Corput sequence in the given base.
double radical_inverse(std::uint64_t index, int base);

/// Drift field f, output map h and the region where both are considered.
struct SystemModel {
  std::string name;
  SmoothMap f;
  SmoothMap h;
  Region region;

  int n() const { return f.in_dim(); }
  int p() const { return h.out_dim(); }
  void validate() const;
};

}  // namespace riemobs
