#include "scalred/reduction.hpp"

#include <cmath>
#include <string>

#include "scalred/quadrature.hpp"

namespace scalred {

double ReducedLagrangian::operator()(const Vec& x, const Vec& xdot, double y) const { return ell(state(x, xdot, y)); }

Vec ReducedLagrangian::state(const Vec& x, const Vec& xdot, double y) const {
  if (static_cast<std::size_t>(x.size()) != base_dim || static_cast<std::size_t>(xdot.size()) != base_dim) {
    throw DimensionError("reduced Lagrangian expects base vectors of dimension " + std::to_string(base_dim));
  }
  Vec z(2 * x.size() + 1);
  z << x, xdot, y;
  return z;
}

ReducedPoint atiyah_forward(const ScalingSystem& sys, const Vec& q, const Vec& v) {
  sys.require_chart(q);
  if (v.size() != q.size()) throw DimensionError("tangent vector and base point differ in dimension");
  ReducedPoint r;
  r.x = sys.project(q);
  r.xdot = jvp(sys.pi, q, v);
  r.y = directional(sys.f, q, v) / sys.scaling(q);
  return r;
}

TangentPoint atiyah_inverse(const ScalingSystem& sys, const Vec& x, const Vec& xdot, double y, double sigma) {
  if (!(sigma > 0.0)) throw ChartError("fiber coordinate must be positive");
  if (static_cast<std::size_t>(x.size()) != sys.base_dim || xdot.size() != x.size()) {
    throw DimensionError("base point and velocity must have the base dimension");
  }
  TangentPoint t;
  t.q = sys.lift(x, sigma);
  sys.require_chart(t.q);
  Vec point(x.size() + 1);
  point << x, sigma;
  Vec dir(x.size() + 1);
  dir << xdot, sigma * y;
  t.v = jvp(sys.triv_inv, point, dir);
  return t;
}

ReducedLagrangian reduce_lagrangian(const LagrangianSystem& L, const ScalingSystem& sys, double representative) {
  sys.check_dimensions();
  if (L.dim != sys.ambient_dim) throw DimensionError("Lagrangian and scaling system differ in dimension");
  if (!(representative > 0.0)) throw ChartError("representative fiber value must be positive");
  const std::size_t k = sys.base_dim;
  const std::size_t n = sys.ambient_dim;

  // The tangent map of triv_inv is carried by the e1 slot of a hyper-dual
  // whose components are themselves of type T.
  auto eval = [lag = L.lagrangian, triv = sys.triv_inv, k, n, representative]<class T>(std::span<const T> z) -> T {
    using Lift = HyperDualT<T>;
    std::vector<Lift> in(k + 1);
    for (std::size_t i = 0; i < k; ++i) in[i] = Lift(z[i], z[k + i], T{}, T{});
    in[k] = Lift(T(representative), T(representative) * z[2 * k], T{}, T{});
    const auto out = triv(std::span<const Lift>(in));
    std::vector<T> qv(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      qv[j] = out[j].re;
      qv[n + j] = out[j].e1;
    }
    return lag(std::span<const T>(qv)) * (1.0 / representative);
  };

  ReducedLagrangian r;
  r.base_dim = k;
  r.provenance = Provenance::derived;
  r.ell = ScalarField::second_order(
      2 * k + 1, [eval](std::span<const double> z) { return eval.template operator()<double>(z); },
      [eval](std::span<const HyperDual> z) { return eval.template operator()<HyperDual>(z); });
  return r;
}

ReducedTrajectory project_trajectory(const ScalingSystem& sys, const Trajectory& g) {
  g.validate();
  ReducedTrajectory r;
  r.times = g.times;
  r.x.reserve(g.samples());
  r.xdot.reserve(g.samples());
  r.y.reserve(g.samples());
  for (std::size_t i = 0; i < g.samples(); ++i) {
    ReducedPoint p;
    try {
      p = atiyah_forward(sys, g.q[i], g.qdot[i]);
    } catch (const ChartError& e) {
      throw ChartError(std::string(e.what()) + " at t = " + std::to_string(g.times[i]));
    }
    r.x.push_back(std::move(p.x));
    r.xdot.push_back(std::move(p.xdot));
    r.y.push_back(p.y);
  }
  r.sigma = sys.scaling(g.q.front());
  return r;
}

Trajectory reconstruct_trajectory(const ScalingSystem& sys, const ReducedTrajectory& r) {
  r.validate();
  if (!(r.sigma > 0.0)) throw ChartError("fiber constant sigma must be positive");
  const std::vector<double> Y = cumulative_integral(r.y, r.step());
  Trajectory g;
  g.times = r.times;
  g.q.reserve(r.samples());
  g.qdot.reserve(r.samples());
  const auto n = static_cast<Eigen::Index>(sys.ambient_dim);
  for (std::size_t i = 0; i < r.samples(); ++i) {
    const Vec& x = r.x[i];
    Vec point(x.size() + 1);
    point << x, r.sigma;
    Vec dir(x.size() + 1);
    dir << r.xdot[i], 0.0;
    const Vec base = sys.triv_inv(point);
    sys.require_chart(base);
    const Vec base_rate = jvp(sys.triv_inv, point, dir);

    const double s = std::exp(Y[i]);
    Vec act_point(n + 1);
    act_point << s, base;
    Vec act_dir(n + 1);
    act_dir << s * r.y[i], base_rate;
    Vec q = sys.psi(act_point);
    if (!sys.in_chart(q)) {
      throw ChartError("reconstructed curve leaves the chart at t = " + std::to_string(r.times[i]));
    }
    g.q.push_back(std::move(q));
    g.qdot.push_back(jvp(sys.psi, act_point, act_dir));
  }
  return g;
}

}  // namespace scalred
