#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "scalred/diffkit.hpp"

namespace scalred {

enum class QuadratureRule { simpson, trapezoid };

const char* to_string(QuadratureRule rule);

/// Composite Simpson when the number of intervals is even, trapezoid
/// otherwise.
QuadratureRule rule_for(std::size_t intervals);

/// Integral of uniformly sampled values over the whole grid.
double integrate(std::span<const double> values, double step);

/// Running integral Y_i = int_0^{t_i}. With an even number of intervals the
/// even nodes use composite Simpson and the odd nodes add a three-point
/// panel to the preceding even node; otherwise cumulative trapezoid.
std::vector<double> cumulative_integral(std::span<const double> values, double step);

/// Time derivative of uniformly sampled values: second-order central
/// differences inside, second-order one-sided at the ends. Needs >= 3
/// samples.
std::vector<double> differentiate(std::span<const double> values, double step);
std::vector<Vec> differentiate(std::span<const Vec> values, double step);

/// t_i = i * horizon / steps for i = 0..steps.
std::vector<double> uniform_grid(std::size_t steps, double horizon);

}  // namespace scalred
