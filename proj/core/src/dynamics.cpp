#include "scalred/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "scalred/quadrature.hpp"

namespace scalred {

namespace {

Vec solve_regular(const Mat& A, const Vec& b, const std::string& what) {
  double cond = std::numeric_limits<double>::infinity();
  Eigen::PartialPivLU<Mat> lu;
  if (A.size() > 0 && A.cwiseAbs().maxCoeff() > 0.0) {
    lu.compute(A);
    const double rc = lu.rcond();
    if (rc > 0.0) cond = 1.0 / rc;
  }
  if (!(cond <= kConditionLimit)) {
    throw SingularMatrixError(what + " is singular (condition estimate " +
                                  (std::isfinite(cond) ? std::to_string(cond) : std::string("inf")) + " > 1e12)",
                              cond);
  }
  return lu.solve(b);
}

Vec join(const Vec& a, const Vec& b) {
  Vec r(a.size() + b.size());
  r << a, b;
  return r;
}

Vec reduced_state(const Vec& x, const Vec& xdot, double y) {
  Vec z(2 * x.size() + 1);
  z << x, xdot, y;
  return z;
}

void check_base(std::size_t base_dim, const Vec& x, const Vec& xdot) {
  if (static_cast<std::size_t>(x.size()) != base_dim || static_cast<std::size_t>(xdot.size()) != base_dim) {
    throw DimensionError("reduced state must have base dimension " + std::to_string(base_dim));
  }
}

enum class ReducedFamily { scaling, standard };

ReducedRates reduced_rates(const ReducedLagrangian& ell, const Vec& x, const Vec& xdot, double y,
                           ReducedFamily family) {
  check_base(ell.base_dim, x, xdot);
  const auto k = static_cast<Eigen::Index>(ell.base_dim);
  const auto e = expand(ell.ell, reduced_state(x, xdot, y));
  const Mat& H = e.hessian.matrix;
  const Vec& g = e.gradient;

  // Unknowns (xddot, ydot); the momenta (dl/dxdot, dl/dy) occupy the
  // contiguous index block [k, 2k].
  const Mat block = H.block(k, k, k + 1, k + 1);
  Vec rhs(k + 1);
  rhs.head(k) = g.head(k);
  rhs[k] = family == ReducedFamily::scaling ? e.value : 0.0;
  rhs -= H.block(k, 0, k + 1, k) * xdot;
  if (family == ReducedFamily::scaling) rhs -= y * g.segment(k, k + 1);

  const Vec sol = solve_regular(block, rhs,
                                family == ReducedFamily::scaling
                                    ? "reduced regularity block [[d2l/dxdot2, d2l/dxdot dy], [d2l/dy dxdot, d2l/dy2]]"
                                    : "standard Lagrange-Poincare block matrix");
  return {sol.head(k), sol[k]};
}

template <class RatesFn>
FirstOrderRhs reduced_rhs(std::size_t base_dim, RatesFn rates) {
  const auto k = static_cast<Eigen::Index>(base_dim);
  return [k, rates](double, const Vec& s) {
    const Vec x = s.head(k);
    const Vec xdot = s.segment(k, k);
    const ReducedRates r = rates(x, xdot, s[2 * k]);
    Vec d(2 * k + 1);
    d << xdot, r.xddot, r.ydot;
    return d;
  };
}

ReducedTrajectory unpack_reduced(const std::vector<Vec>& states, const IntegratorConfig& cfg, std::size_t base_dim,
                                 double sigma) {
  const auto k = static_cast<Eigen::Index>(base_dim);
  ReducedTrajectory r;
  r.times = uniform_grid(cfg.steps, cfg.horizon);
  r.sigma = sigma;
  for (const auto& s : states) {
    r.x.push_back(s.head(k));
    r.xdot.push_back(s.segment(k, k));
    r.y.push_back(s[2 * k]);
  }
  return r;
}

double series_max(const std::vector<double>& v) {
  double m = 0.0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

}  // namespace

void IntegratorConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("integrator needs at least one step");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("integration horizon must be positive");
}

double HerglotzLagrangian::operator()(const Vec& x, const Vec& xdot, double y) const {
  check_base(base_dim, x, xdot);
  return lhat(reduced_state(x, xdot, y));
}

Vec el_acceleration(const LagrangianSystem& L, const Vec& q, const Vec& qdot) {
  const auto n = static_cast<Eigen::Index>(L.dim);
  const auto e = expand(L.lagrangian, L.state(q, qdot));
  const Mat& H = e.hessian.matrix;
  const Mat mass = H.block(n, n, n, n);
  const Vec rhs = e.gradient.head(n) - H.block(n, 0, n, n) * qdot;
  return solve_regular(mass, rhs, "mass matrix d2L/dqdot2 (singular Lagrangian)");
}

ReducedRates slp_rates(const ReducedLagrangian& ell, const Vec& x, const Vec& xdot, double y) {
  return reduced_rates(ell, x, xdot, y, ReducedFamily::scaling);
}

ReducedRates std_lp_rates(const ReducedLagrangian& ell, const Vec& x, const Vec& xdot, double y) {
  return reduced_rates(ell, x, xdot, y, ReducedFamily::standard);
}

ReducedRates herglotz_rates(const HerglotzLagrangian& lh, const Vec& x, const Vec& xdot, double y) {
  check_base(lh.base_dim, x, xdot);
  const auto k = static_cast<Eigen::Index>(lh.base_dim);
  const auto e = expand(lh.lhat, reduced_state(x, xdot, y));
  const Mat& H = e.hessian.matrix;
  const Vec& g = e.gradient;
  const double ydot = e.value;
  const Vec rhs = g[2 * k] * g.segment(k, k) + g.head(k) - H.block(k, 0, k, k) * xdot - H.block(k, 2 * k, k, 1).col(0) * ydot;
  return {solve_regular(H.block(k, k, k, k), rhs, "Herglotz velocity Hessian d2L/dxdot2"), ydot};
}

std::vector<Vec> rk4(const FirstOrderRhs& rhs, const Vec& y0, double t0, double dt, std::size_t steps) {
  std::vector<Vec> out;
  out.reserve(steps + 1);
  out.push_back(y0);
  Vec y = y0;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t0 + dt * static_cast<double>(i);
    auto stage = [&](double ts, const Vec& ys) {
      try {
        return rhs(ts, ys);
      } catch (const IntegrationError&) {
        throw;
      } catch (const Error& e) {
        throw IntegrationError(std::string(e.what()) + " at t = " + std::to_string(ts), ts);
      }
    };
    const Vec k1 = stage(t, y);
    const Vec k2 = stage(t + 0.5 * dt, y + 0.5 * dt * k1);
    const Vec k3 = stage(t + 0.5 * dt, y + 0.5 * dt * k2);
    const Vec k4 = stage(t + dt, y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(y);
  }
  return out;
}

Trajectory integrate_el(const LagrangianSystem& L, const Vec& q0, const Vec& v0, const IntegratorConfig& cfg) {
  cfg.validate();
  const auto n = static_cast<Eigen::Index>(L.dim);
  if (q0.size() != n || v0.size() != n) throw DimensionError("initial state must match the configuration dimension");
  FirstOrderRhs rhs = [&L, n](double, const Vec& s) {
    const Vec q = s.head(n);
    const Vec v = s.tail(n);
    return join(v, el_acceleration(L, q, v));
  };
  const auto states = rk4(rhs, join(q0, v0), 0.0, cfg.step(), cfg.steps);
  Trajectory g;
  g.times = uniform_grid(cfg.steps, cfg.horizon);
  for (const auto& s : states) {
    g.q.push_back(s.head(n));
    g.qdot.push_back(s.tail(n));
  }
  return g;
}

ReducedTrajectory integrate_slp(const ReducedLagrangian& ell, const Vec& x0, const Vec& xdot0, double y0,
                                const IntegratorConfig& cfg, double sigma) {
  cfg.validate();
  check_base(ell.base_dim, x0, xdot0);
  auto rhs = reduced_rhs(ell.base_dim, [&ell](const Vec& x, const Vec& xd, double y) { return slp_rates(ell, x, xd, y); });
  const auto states = rk4(rhs, reduced_state(x0, xdot0, y0), 0.0, cfg.step(), cfg.steps);
  return unpack_reduced(states, cfg, ell.base_dim, sigma);
}

ReducedTrajectory integrate_std_lp(const ReducedLagrangian& ell, const Vec& x0, const Vec& xdot0, double y0,
                                   const IntegratorConfig& cfg) {
  cfg.validate();
  check_base(ell.base_dim, x0, xdot0);
  auto rhs =
      reduced_rhs(ell.base_dim, [&ell](const Vec& x, const Vec& xd, double y) { return std_lp_rates(ell, x, xd, y); });
  const auto states = rk4(rhs, reduced_state(x0, xdot0, y0), 0.0, cfg.step(), cfg.steps);
  return unpack_reduced(states, cfg, ell.base_dim, 1.0);
}

ReducedTrajectory integrate_herglotz(const HerglotzLagrangian& lh, const Vec& x0, const Vec& xdot0, double y0,
                                     const IntegratorConfig& cfg) {
  cfg.validate();
  check_base(lh.base_dim, x0, xdot0);
  auto rhs =
      reduced_rhs(lh.base_dim, [&lh](const Vec& x, const Vec& xd, double y) { return herglotz_rates(lh, x, xd, y); });
  const auto states = rk4(rhs, reduced_state(x0, xdot0, y0), 0.0, cfg.step(), cfg.steps);
  return unpack_reduced(states, cfg, lh.base_dim, 1.0);
}

double ResidualSeries::max_horizontal() const { return max_norm(horizontal); }
double ResidualSeries::max_vertical() const { return series_max(vertical); }
double ResidualSeries::max() const { return std::max(max_horizontal(), max_vertical()); }

double max_norm(const std::vector<Vec>& series) {
  double m = 0.0;
  for (const auto& v : series) {
    if (v.size() > 0) m = std::max(m, v.cwiseAbs().maxCoeff());
  }
  return m;
}

std::vector<Vec> el_residual(const LagrangianSystem& L, const Trajectory& g) {
  g.validate();
  const auto n = static_cast<Eigen::Index>(L.dim);
  std::vector<Vec> momentum;
  std::vector<Vec> force;
  for (std::size_t i = 0; i < g.samples(); ++i) {
    const Vec grad = gradient(L.lagrangian, L.state(g.q[i], g.qdot[i]));
    force.push_back(grad.head(n));
    momentum.push_back(grad.tail(n));
  }
  const auto dp = differentiate(momentum, g.step());
  std::vector<Vec> res(g.samples());
  for (std::size_t i = 0; i < g.samples(); ++i) res[i] = -dp[i] + force[i];
  return res;
}

namespace {

struct ReducedSamples {
  std::vector<Vec> dx;   // dl/dx
  std::vector<Vec> px;   // dl/dxdot
  std::vector<double> py;
  std::vector<double> value;
};

ReducedSamples sample_reduced(const ScalarField& field, std::size_t base_dim, const ReducedTrajectory& r) {
  r.validate();
  const auto k = static_cast<Eigen::Index>(base_dim);
  ReducedSamples s;
  for (std::size_t i = 0; i < r.samples(); ++i) {
    check_base(base_dim, r.x[i], r.xdot[i]);
    const Vec z = reduced_state(r.x[i], r.xdot[i], r.y[i]);
    const Vec g = gradient(field, z);
    s.dx.push_back(g.head(k));
    s.px.push_back(g.segment(k, k));
    s.py.push_back(g[2 * k]);
    s.value.push_back(field(z));
  }
  return s;
}

}  // namespace

ResidualSeries slp_residual(const ReducedLagrangian& ell, const ReducedTrajectory& r) {
  const auto s = sample_reduced(ell.ell, ell.base_dim, r);
  const auto dpx = differentiate(s.px, r.step());
  const auto dpy = differentiate(s.py, r.step());
  ResidualSeries out;
  for (std::size_t i = 0; i < r.samples(); ++i) {
    out.horizontal.push_back(-dpx[i] - r.y[i] * s.px[i] + s.dx[i]);
    out.vertical.push_back(-dpy[i] - r.y[i] * s.py[i] + s.value[i]);
  }
  return out;
}

ResidualSeries std_lp_residual(const ReducedLagrangian& ell, const ReducedTrajectory& r) {
  const auto s = sample_reduced(ell.ell, ell.base_dim, r);
  const auto dpx = differentiate(s.px, r.step());
  const auto dpy = differentiate(s.py, r.step());
  ResidualSeries out;
  for (std::size_t i = 0; i < r.samples(); ++i) {
    out.horizontal.push_back(-dpx[i] + s.dx[i]);
    out.vertical.push_back(-dpy[i]);
  }
  return out;
}

ResidualSeries herglotz_residual(const HerglotzLagrangian& lh, const ReducedTrajectory& r) {
  const auto s = sample_reduced(lh.lhat, lh.base_dim, r);
  const auto dpx = differentiate(s.px, r.step());
  const auto ydot = differentiate(r.y, r.step());
  ResidualSeries out;
  for (std::size_t i = 0; i < r.samples(); ++i) {
    out.horizontal.push_back(-dpx[i] + s.py[i] * s.px[i] + s.dx[i]);
    out.vertical.push_back(s.value[i] - ydot[i]);
  }
  return out;
}

ReducedPoint AbelianSymmetry::project(const Vec& q, const Vec& v) const {
  return {pi(q), jvp(pi, q, v), connection(q).dot(v)};
}

ReducedTrajectory AbelianSymmetry::project(const Trajectory& g) const {
  g.validate();
  ReducedTrajectory r;
  r.times = g.times;
  for (std::size_t i = 0; i < g.samples(); ++i) {
    auto p = project(g.q[i], g.qdot[i]);
    r.x.push_back(std::move(p.x));
    r.xdot.push_back(std::move(p.xdot));
    r.y.push_back(p.y);
  }
  return r;
}

Trajectory standard_reconstruct(const AbelianSymmetry& sym, const std::vector<double>& y, const Trajectory& h,
                                double g0) {
  h.validate();
  if (y.size() != h.samples()) throw DimensionError("fiber rate and horizontal lift differ in sample count");
  if (sym.group == AbelianGroup::multiplicative && !(g0 > 0.0)) {
    throw std::invalid_argument("multiplicative group element must be positive");
  }
  const auto Y = cumulative_integral(y, h.step());
  const auto n = static_cast<Eigen::Index>(sym.ambient_dim);
  Trajectory g;
  g.times = h.times;
  for (std::size_t i = 0; i < h.samples(); ++i) {
    double grp = 0.0;
    double grp_rate = 0.0;
    if (sym.group == AbelianGroup::additive) {
      grp = g0 + Y[i];
      grp_rate = y[i];
    } else {
      grp = g0 * std::exp(Y[i]);
      grp_rate = grp * y[i];
    }
    Vec point(n + 1);
    point << grp, h.q[i];
    Vec dir(n + 1);
    dir << grp_rate, h.qdot[i];
    g.q.push_back(sym.psi(point));
    g.qdot.push_back(jvp(sym.psi, point, dir));
  }
  return g;
}

}  // namespace scalred
