#include "scalred/quadrature.hpp"

#include <stdexcept>

namespace scalred {

const char* to_string(QuadratureRule rule) { return rule == QuadratureRule::simpson ? "simpson" : "trapezoid"; }

QuadratureRule rule_for(std::size_t intervals) {
  return (intervals >= 2 && intervals % 2 == 0) ? QuadratureRule::simpson : QuadratureRule::trapezoid;
}

double integrate(std::span<const double> values, double step) {
  if (values.size() < 2) throw DimensionError("quadrature needs at least two samples");
  const std::size_t n = values.size() - 1;
  if (rule_for(n) == QuadratureRule::simpson) {
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i < n; i += 2) odd += values[i];
    for (std::size_t i = 2; i < n; i += 2) even += values[i];
    return step / 3.0 * (values[0] + values[n] + 4.0 * odd + 2.0 * even);
  }
  double s = 0.5 * (values[0] + values[n]);
  for (std::size_t i = 1; i < n; ++i) s += values[i];
  return step * s;
}

std::vector<double> cumulative_integral(std::span<const double> values, double step) {
  if (values.size() < 2) throw DimensionError("quadrature needs at least two samples");
  const std::size_t n = values.size() - 1;
  std::vector<double> out(values.size(), 0.0);
  if (rule_for(n) == QuadratureRule::simpson) {
    for (std::size_t i = 2; i <= n; i += 2) {
      out[i] = out[i - 2] + step / 3.0 * (values[i - 2] + 4.0 * values[i - 1] + values[i]);
    }
    for (std::size_t i = 1; i < n; i += 2) {
      // int_{t_{i-1}}^{t_i} of the parabola through nodes i-1, i, i+1.
      out[i] = out[i - 1] + step / 12.0 * (5.0 * values[i - 1] + 8.0 * values[i] - values[i + 1]);
    }
    return out;
  }
  for (std::size_t i = 1; i <= n; ++i) out[i] = out[i - 1] + 0.5 * step * (values[i - 1] + values[i]);
  return out;
}

std::vector<double> differentiate(std::span<const double> values, double step) {
  const std::size_t m = values.size();
  if (m < 3) throw DimensionError("time differencing needs at least three samples");
  std::vector<double> d(m);
  const double inv2h = 1.0 / (2.0 * step);
  // Written in differences so constant data differentiates to exactly zero.
  d[0] = (4.0 * (values[1] - values[0]) - (values[2] - values[0])) * inv2h;
  for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (values[i + 1] - values[i - 1]) * inv2h;
  d[m - 1] = (4.0 * (values[m - 1] - values[m - 2]) - (values[m - 1] - values[m - 3])) * inv2h;
  return d;
}

std::vector<Vec> differentiate(std::span<const Vec> values, double step) {
  const std::size_t m = values.size();
  if (m < 3) throw DimensionError("time differencing needs at least three samples");
  std::vector<Vec> d(m);
  const double inv2h = 1.0 / (2.0 * step);
  d[0] = (4.0 * (values[1] - values[0]) - (values[2] - values[0])) * inv2h;
  for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (values[i + 1] - values[i - 1]) * inv2h;
  d[m - 1] = (4.0 * (values[m - 1] - values[m - 2]) - (values[m - 1] - values[m - 3])) * inv2h;
  return d;
}

std::vector<double> uniform_grid(std::size_t steps, double horizon) {
  if (steps < 1) throw std::invalid_argument("grid needs at least one step");
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
  return t;
}

}  // namespace scalred
