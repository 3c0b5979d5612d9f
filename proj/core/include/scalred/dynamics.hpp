#pragma once

// Rate-form right-hand sides, fixed-step RK4 integration and residual
// evaluators for four equation families on flat charts:
//
//   Euler-Lagrange           d/dt dL/dqdot = dL/dq
//   scaling Lagrange-Poincare d/dt dl/dxdot + y dl/dxdot - dl/dx = 0
//                             d/dt dl/dy    + y dl/dy    - l     = 0
//   standard (abelian) LP     d/dt dl/dxdot - dl/dx = 0,  d/dt dl/dy = 0
//   Herglotz                  d/dt dL/dxdot = dL/dy dL/dxdot + dL/dx,
//                             ydot = L
//
// Residuals use the "expression = 0" sign convention of the equations as
// written with the time derivative negated, e.g. the scaling horizontal
// residual is -d/dt dl/dxdot - y dl/dxdot + dl/dx.

#include <functional>
#include <vector>

#include "scalred/reduction.hpp"
#include "scalred/systems.hpp"
#include "scalred/trajectory.hpp"

namespace scalred {

struct IntegratorConfig {
  std::size_t steps = 1000;
  double horizon = 1.0;

  void validate() const;
  double step() const { return horizon / static_cast<double>(steps); }
};

/// Action-dependent Lagrangian Lhat(x, xdot, y); the field takes
/// 2*base_dim + 1 inputs.
struct HerglotzLagrangian {
  std::size_t base_dim = 0;
  ScalarField lhat;

  double operator()(const Vec& x, const Vec& xdot, double y) const;
};

/// Matrices whose estimated condition number exceeds this are treated as
/// singular.
inline constexpr double kConditionLimit = 1e12;

struct ReducedRates {
  Vec xddot;
  double ydot = 0.0;
};

/// Solves M(q, qdot) qddot = dL/dq - (d2L/dqdot dq) qdot. Throws
/// SingularMatrixError when M is singular.
Vec el_acceleration(const LagrangianSystem& L, const Vec& q, const Vec& qdot);

ReducedRates slp_rates(const ReducedLagrangian& ell, const Vec& x, const Vec& xdot, double y);
ReducedRates std_lp_rates(const ReducedLagrangian& ell, const Vec& x, const Vec& xdot, double y);
ReducedRates herglotz_rates(const HerglotzLagrangian& lh, const Vec& x, const Vec& xdot, double y);

using FirstOrderRhs = std::function<Vec(double, const Vec&)>;

/// Classical RK4 with `steps` steps of signed size `dt`; returns every
/// state including the initial one.
std::vector<Vec> rk4(const FirstOrderRhs& rhs, const Vec& y0, double t0, double dt, std::size_t steps);

/// Integration errors are rethrown as IntegrationError carrying the time
/// of the failing stage.
Trajectory integrate_el(const LagrangianSystem& L, const Vec& q0, const Vec& v0, const IntegratorConfig& cfg);
ReducedTrajectory integrate_slp(const ReducedLagrangian& ell, const Vec& x0, const Vec& xdot0, double y0,
                                const IntegratorConfig& cfg, double sigma = 1.0);
ReducedTrajectory integrate_std_lp(const ReducedLagrangian& ell, const Vec& x0, const Vec& xdot0, double y0,
                                   const IntegratorConfig& cfg);
ReducedTrajectory integrate_herglotz(const HerglotzLagrangian& lh, const Vec& x0, const Vec& xdot0, double y0,
                                     const IntegratorConfig& cfg);

/// Per-sample residuals of a reduced equation pair.
struct ResidualSeries {
  std::vector<Vec> horizontal;
  std::vector<double> vertical;

  double max_horizontal() const;
  double max_vertical() const;
  double max() const;
};

/// Per-sample Euler-Lagrange residual -d/dt dL/dqdot + dL/dq.
std::vector<Vec> el_residual(const LagrangianSystem& L, const Trajectory& g);
double max_norm(const std::vector<Vec>& series);

ResidualSeries slp_residual(const ReducedLagrangian& ell, const ReducedTrajectory& r);
ResidualSeries std_lp_residual(const ReducedLagrangian& ell, const ReducedTrajectory& r);
/// horizontal: -d/dt dL/dxdot + dL/dy dL/dxdot + dL/dx;  vertical: L - ydot.
ResidualSeries herglotz_residual(const HerglotzLagrangian& lh, const ReducedTrajectory& r);

/// Group structure of a one-dimensional abelian symmetry.
enum class AbelianGroup { additive, multiplicative };

/// A free abelian one-parameter symmetry with a flat connection form.
/// psi: (g, q) -> q; pi: q -> x; connection: q -> covector (the form's
/// coefficients, so y = connection(q) . qdot).
struct AbelianSymmetry {
  AbelianGroup group = AbelianGroup::additive;
  std::size_t ambient_dim = 0;
  VectorField psi;
  VectorField pi;
  VectorField connection;

  ReducedPoint project(const Vec& q, const Vec& v) const;
  ReducedTrajectory project(const Trajectory& g) const;
};

/// gamma(t) = psi(g(t), h(t)) with g(t) = g0 + int y (additive) or
/// g0 * exp(int y) (multiplicative); velocities by the chain rule.
Trajectory standard_reconstruct(const AbelianSymmetry& sym, const std::vector<double>& y, const Trajectory& h,
                                double g0);

}  // namespace scalred
