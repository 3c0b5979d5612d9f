#pragma once

// Discrete action functionals, admissible variation generators and
// central-difference first variations.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalred/quadrature.hpp"
#include "scalred/reduction.hpp"
#include "scalred/systems.hpp"

namespace scalred {

struct ActionValue {
  double value = 0.0;
  QuadratureRule rule = QuadratureRule::simpson;
  std::size_t grid_size = 0;
};

/// A = int L(q, qdot) dt.
ActionValue action_full(const LagrangianSystem& L, const Trajectory& g);
/// A_scaling = int exp(Y(t)) l(x, xdot, y) dt, Y the running integral of y.
ActionValue action_reduced(const ReducedLagrangian& ell, const ReducedTrajectory& r);
/// A_standard = int l(x, xdot, y) dt.
ActionValue action_standard_reduced(const ReducedLagrangian& ell, const ReducedTrajectory& r);

enum class VariationClass { hamilton, reduced };

const char* to_string(VariationClass c);

/// Sampled admissible variation.
///
/// hamilton: `delta` holds delta-gamma, zero at both endpoints.
/// reduced:  `delta` holds delta-x (zero at both endpoints) and
///           `delta_y` = d/dt eta for an endpoint-vanishing eta, so its
///           integral over the grid vanishes.
/// `delta_dot` is the exact time derivative of `delta`.
struct VariationField {
  VariationClass kind = VariationClass::hamilton;
  std::vector<double> times;
  std::vector<Vec> delta;
  std::vector<Vec> delta_dot;
  std::vector<double> eta;
  std::vector<double> delta_y;
  std::uint64_t seed = 0;

  /// Linear combination a*this + b*other (same grid and class).
  VariationField combine(double a, const VariationField& other, double b) const;
};

/// Random sine-series bumps sin(k pi t / tau), k = 1..modes, with
/// coefficients drawn from the seed. Needs at least four grid samples.
VariationField sample_variation(VariationClass kind, const std::vector<double>& times, std::size_t dim,
                                std::uint64_t seed, std::size_t modes = 3);

/// (A[g + h v] - A[g - h v]) / (2h).
double first_variation(const LagrangianSystem& L, const Trajectory& g, const VariationField& v, double h = 1e-5);
/// Same for the scaling-reduced action on (x, y).
double first_variation(const ReducedLagrangian& ell, const ReducedTrajectory& r, const VariationField& v,
                       double h = 1e-5);

struct ProportionalityReport {
  double full_action = 0.0;
  double sigma = 0.0;
  double reduced_action = 0.0;
  /// |A - sigma * A_scaling| / (1 + |A|).
  double discrepancy = 0.0;
};

/// Computes A(gamma) and sigma * A_scaling(project(gamma)) independently.
ProportionalityReport proportionality_check(const LagrangianSystem& L, const ScalingSystem& sys, const Trajectory& g);
ProportionalityReport proportionality_check(const LagrangianSystem& L, const ScalingSystem& sys,
                                            const ReducedLagrangian& ell, const Trajectory& g);

/// Per-seed first variations with a pass verdict against
/// tolerance_scale * (1 + |action|).
struct VariationBattery {
  std::string principle;
  double action = 0.0;
  double h = 1e-5;
  double tolerance_scale = 1e-6;
  std::vector<std::uint64_t> seeds;
  std::vector<double> values;

  double max_abs() const;
  double threshold() const;
  bool pass() const { return max_abs() <= threshold(); }
};

VariationBattery hamilton_battery(const LagrangianSystem& L, const Trajectory& g, std::size_t count,
                                  std::uint64_t first_seed, double h = 1e-5, double tolerance_scale = 1e-6);
VariationBattery reduced_battery(const ReducedLagrangian& ell, const ReducedTrajectory& r, std::size_t count,
                                 std::uint64_t first_seed, double h = 1e-5, double tolerance_scale = 1e-6);

nlohmann::json to_json(const VariationBattery& b);
nlohmann::json to_json(const ProportionalityReport& p);

}  // namespace scalred
