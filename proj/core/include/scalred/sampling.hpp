#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "scalred/diffkit.hpp"

namespace scalred {

/// Chart region probed by the validators. Scales are drawn log-uniformly
/// in [scale_min, scale_max].
struct SamplingBox {
  Vec lower;
  Vec upper;
  std::size_t count = 64;
  std::uint64_t seed = 1;
  double scale_min = 0.1;
  double scale_max = 10.0;

  /// Throws DimensionError / std::invalid_argument on an empty or inverted box.
  void validate(std::size_t dim) const;
};

/// Randomly shifted Halton points in [0,1)^dim. Deterministic in (dim, seed).
class QuasiRandom {
 public:
  QuasiRandom(std::size_t dim, std::uint64_t seed);
  std::vector<double> next();

 private:
  std::size_t index_ = 1;
  std::vector<double> shift_;
};

/// Next 53-bit uniform double in [0,1) from a splitmix64 state.
double uniform01(std::uint64_t& state);

}  // namespace scalred
