#pragma once

// Atiyah identification for scaling symmetries, the reduced Lagrangian and
// the projection / reconstruction maps between full and reduced curves.

#include "scalred/systems.hpp"
#include "scalred/trajectory.hpp"

namespace scalred {

enum class Provenance { derived, direct };

/// ell(x, xdot, y); the field takes 2*base_dim + 1 inputs ordered
/// (x, xdot, y).
struct ReducedLagrangian {
  std::size_t base_dim = 0;
  ScalarField ell;
  Provenance provenance = Provenance::direct;

  double operator()(const Vec& x, const Vec& xdot, double y) const;
  Vec state(const Vec& x, const Vec& xdot, double y) const;
};

struct ReducedPoint {
  Vec x;
  Vec xdot;
  double y = 0.0;
};

struct TangentPoint {
  Vec q;
  Vec v;
};

/// (q, v) -> (pi(q), pi_* v, df(v) / f(q)).
ReducedPoint atiyah_forward(const ScalingSystem& sys, const Vec& q, const Vec& v);

/// Inverse of atiyah_forward on the level set f = sigma: q = triv_inv(x,
/// sigma) and v = D triv_inv(x, sigma) (xdot, sigma * y).
TangentPoint atiyah_inverse(const ScalingSystem& sys, const Vec& x, const Vec& xdot, double y, double sigma);

/// ell(x, xdot, y) = L(atiyah_inverse(x, xdot, y, representative)) /
/// representative. Any positive representative gives the same field on
/// homogeneous L; the canonical choice is 1.
ReducedLagrangian reduce_lagrangian(const LagrangianSystem& L, const ScalingSystem& sys, double representative = 1.0);

/// Per-sample atiyah_forward; sigma = f(q(0)).
ReducedTrajectory project_trajectory(const ScalingSystem& sys, const Trajectory& g);

/// gamma(t) = psi(exp Y(t), triv_inv(x(t), sigma)) with Y the running
/// integral of y; velocities by the chain rule through psi and triv_inv.
Trajectory reconstruct_trajectory(const ScalingSystem& sys, const ReducedTrajectory& r);

}  // namespace scalred
