#include "riemobs/region.hpp"

#include <array>

namespace riemobs {

namespace {

constexpr std::array<int, 12> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

// Different seeds start the sequence at well separated indices.
constexpr std::uint64_t kSeedStride = 1000003;

}  // namespace

double radical_inverse(std::uint64_t index, int base) {
  double inv_base = 1.0 / base, factor = inv_base, out = 0.0;
  while (index > 0) {
    out += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv_base;
  }
  return out;
}

Region Region::box(Vec lo, Vec hi, std::string name) {
  Region r;
  r.name = std::move(name);
  r.lo = std::move(lo);
  r.hi = std::move(hi);
  return r;
}

bool Region::contains(const Vec& x) const {
  if (x.size() != lo.size() || !x.allFinite()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) < lo(i) || x(i) > hi(i)) return false;
  return !member || member(x);
}

std::vector<Vec> Region::sample(std::uint64_t seed, int count) const {
  if (dim() > static_cast<int>(kPrimes.size())) {
    throw Error(ErrorCode::DimensionMismatch, "Halton sampler supports at most 12 dimensions");
  }
  std::vector<Vec> out;
  out.reserve(count);
  const std::uint64_t start = 1 + seed * kSeedStride;
  const std::uint64_t budget = 1000 * static_cast<std::uint64_t>(std::max(count, 1));
  for (std::uint64_t k = 0; k < budget && static_cast<int>(out.size()) < count; ++k) {
    Vec x(dim());
    for (int i = 0; i < dim(); ++i) {
      x(i) = lo(i) + (hi(i) - lo(i)) * radical_inverse(start + k, kPrimes[i]);
    }
    if (contains(x)) out.push_back(std::move(x));
  }
  if (static_cast<int>(out.size()) < count) {
    throw Error(ErrorCode::InsufficientSamples, "region '" + name + "' rejected too many candidates");
  }
  return out;
}

void SystemModel::validate() const {
  if (f.empty() || h.empty()) throw Error(ErrorCode::PreconditionViolation, "model is missing f or h");
  if (f.in_dim() != f.out_dim()) throw Error(ErrorCode::DimensionMismatch, "drift must map R^n to R^n");
  if (h.in_dim() != f.in_dim()) throw Error(ErrorCode::DimensionMismatch, "output map has wrong input size");
  if (h.out_dim() < 1 || h.out_dim() > f.in_dim()) {
    throw Error(ErrorCode::DimensionMismatch, "output dimension must satisfy 1 <= p <= n");
  }
  if (region.dim() != f.in_dim()) throw Error(ErrorCode::DimensionMismatch, "region has wrong dimension");
}

}  // namespace riemobs
