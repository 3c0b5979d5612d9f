#pragma once

// Independent reference computations used by the tests. Nothing here
// touches the hyper-dual machinery: derivatives are central differences of
// plain double evaluations.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include "scalred/diffkit.hpp"
#include "scalred/dynamics.hpp"
#include "scalred/reduction.hpp"
#include "scalred/sampling.hpp"
#include "scalred/trajectory.hpp"

namespace oracle {

using scalred::Mat;
using scalred::Vec;
using RealFn = std::function<double(const Vec&)>;

inline RealFn real(const scalred::ScalarField& f) {
  return [f](const Vec& x) { return f(x); };
}

inline Vec fd_gradient(const RealFn& f, const Vec& x, double h = 1e-5) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec p = x, m = x;
    p[i] += h;
    m[i] -= h;
    g[i] = (f(p) - f(m)) / (2.0 * h);
  }
  return g;
}

inline Mat fd_hessian(const RealFn& f, const Vec& x, double h) {
  const auto n = x.size();
  Mat H(n, n);
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      if (i == j) {
        Vec p = x, m = x;
        p[i] += h;
        m[i] -= h;
        H(i, i) = (f(p) - 2.0 * f0 + f(m)) / (h * h);
      } else {
        Vec pp = x, pm = x, mp = x, mm = x;
        pp[i] += h, pp[j] += h;
        pm[i] += h, pm[j] -= h;
        mp[i] -= h, mp[j] += h;
        mm[i] -= h, mm[j] -= h;
        H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
      }
    }
  }
  return H;
}

inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h = 1e-6) {
  const Vec f0 = f(x);
  Mat J(f0.size(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec p = x, m = x;
    p[i] += h;
    m[i] -= h;
    J.col(i) = (f(p) - f(m)) / (2.0 * h);
  }
  return J;
}

/// Fourth-order five-point derivative of a scalar function of time.
inline double fd_time(const std::function<double(double)>& g, double t, double e = 1e-2) {
  return (-g(t + 2 * e) + 8 * g(t + e) - 8 * g(t - e) + g(t - 2 * e)) / (12 * e);
}

/// Reduced rates from the residual form alone: for candidate accelerations
/// (a, b) the quadratic curve x + xdot t + a t^2/2, y + b t is pushed
/// through the equations with momenta and their time derivatives taken by
/// finite differences. The residual is affine in (a, b); three probes
/// determine it and a linear solve recovers the rates.
///
/// `scaling` selects the scaling family (true) or the standard one.
inline scalred::ReducedRates fd_reduced_rates(const RealFn& ell, const Vec& x, const Vec& xdot, double y,
                                              bool scaling) {
  const auto k = x.size();
  auto residual = [&](const Vec& a, double b) {
    auto state = [&](double t) {
      Vec s(2 * k + 1);
      s << x + xdot * t + 0.5 * a * t * t, xdot + a * t, y + b * t;
      return s;
    };
    Vec r(k + 1);
    const Vec s0 = state(0.0);
    const Vec g0 = fd_gradient(ell, s0);
    for (Eigen::Index i = 0; i <= k; ++i) {
      auto momentum = [&](double t) { return fd_gradient(ell, state(t))[k + i]; };
      const double pdot = fd_time(momentum, 0.0);
      double rhs = i < k ? g0[i] : (scaling ? ell(s0) : 0.0);
      if (scaling) rhs -= y * g0[k + i];
      r[i] = -pdot + rhs;
    }
    return r;
  };
  const Vec r0 = residual(Vec::Zero(k), 0.0);
  Mat A(k + 1, k + 1);
  for (Eigen::Index j = 0; j <= k; ++j) {
    Vec a = Vec::Zero(k);
    double b = 0.0;
    if (j < k) a[j] = 1.0; else b = 1.0;
    A.col(j) = residual(a, b) - r0;
  }
  const Vec sol = A.fullPivLu().solve(-r0);
  return {sol.head(k), sol[k]};
}

/// Random smooth positive curve in the open quadrant with analytic
/// velocity: q_i(t) = c_i exp(sum_m a_im sin(w_m t + p_im)).
struct QuadrantCurve {
  Vec c;
  Mat amp;
  Mat phase;
  Vec freq;

  explicit QuadrantCurve(std::uint64_t seed, std::size_t dim = 2) {
    std::uint64_t s = seed * 0x9E3779B97F4A7C15ULL + 17;
    auto u = [&s] { return scalred::uniform01(s); };
    c.resize(dim);
    amp.resize(dim, 3);
    phase.resize(dim, 3);
    freq.resize(3);
    for (Eigen::Index m = 0; m < 3; ++m) freq[m] = 0.5 + 2.0 * u();
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(dim); ++i) {
      c[i] = 0.6 + 0.8 * u();
      for (Eigen::Index m = 0; m < 3; ++m) {
        amp(i, m) = 0.3 * (2.0 * u() - 1.0);
        phase(i, m) = 2.0 * std::numbers::pi * u();
      }
    }
  }

  scalred::Trajectory sample(std::size_t steps, double horizon) const {
    scalred::Trajectory g;
    for (std::size_t j = 0; j <= steps; ++j) {
      const double t = horizon * static_cast<double>(j) / static_cast<double>(steps);
      Vec q(c.size()), v(c.size());
      for (Eigen::Index i = 0; i < c.size(); ++i) {
        double e = 0.0, de = 0.0;
        for (Eigen::Index m = 0; m < 3; ++m) {
          e += amp(i, m) * std::sin(freq[m] * t + phase(i, m));
          de += amp(i, m) * freq[m] * std::cos(freq[m] * t + phase(i, m));
        }
        q[i] = c[i] * std::exp(e);
        v[i] = q[i] * de;
      }
      g.times.push_back(t);
      g.q.push_back(q);
      g.qdot.push_back(v);
    }
    return g;
  }
};

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) out[i++] = a;
  return out;
}

/// Largest |a - b| / max(1, |b|) entry.
inline double rel_err(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
  return m;
}

}  // namespace oracle
