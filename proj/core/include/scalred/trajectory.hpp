#pragma once

#include <vector>

#include "scalred/diffkit.hpp"

namespace scalred {

/// Uniformly sampled curve in the configuration chart.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> q;
  std::vector<Vec> qdot;

  std::size_t samples() const noexcept { return times.size(); }
  double step() const;
  /// Throws if the grid is not uniform and strictly increasing or the
  /// sample arrays disagree in length.
  void validate() const;
};

/// Sampled (x, xdot, y) on the quotient plus the fiber constant sigma.
struct ReducedTrajectory {
  std::vector<double> times;
  std::vector<Vec> x;
  std::vector<Vec> xdot;
  std::vector<double> y;
  double sigma = 1.0;

  std::size_t samples() const noexcept { return times.size(); }
  double step() const;
  void validate() const;
};

}  // namespace scalred
