#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "scalred/dynamics.hpp"
#include "scalred/expression.hpp"
#include "scalred/quadrature.hpp"
#include "scalred/scenarios.hpp"
#include "scalred/variational.hpp"

using namespace scalred;
using oracle::vec;

namespace {

ReducedLagrangian reduced(const std::string& src) {
  return {1, to_field(Expression::parse(src, {"x", "xdot", "y"})), Provenance::direct};
}

ReducedTrajectory line(std::size_t steps, double horizon, double x0, double v, double y) {
  ReducedTrajectory r;
  for (double t : uniform_grid(steps, horizon)) {
    r.times.push_back(t);
    r.x.push_back(vec({x0 + v * t}));
    r.xdot.push_back(vec({v}));
    r.y.push_back(y);
  }
  return r;
}

Trajectory jacobi_solution(std::size_t steps) {
  const auto s = builtin("jacobi-arctan");
  return integrate_el(*s.lagrangian, *s.initial.q, *s.initial.qdot, {steps, 2.0});
}

ReducedTrajectory jacobi_reduced_solution(std::size_t steps) {
  const auto s = builtin("jacobi-arctan");
  const auto p = s.initial_reduced();
  return integrate_slp(s.reduced(), p.x, p.xdot, p.y, {steps, 2.0}, s.scaling->scaling(*s.initial.q));
}

// Localized zero-mean bump on [t0 - eps, t0 + eps]: one full sine period.
double bump(double s, double t0, double eps) {
  if (s < t0 - eps || s > t0 + eps) return 0.0;
  return std::sin((s - t0 + eps) / eps * std::numbers::pi);
}

}  // namespace

TEST(ActionFull, FreeParticleIsExact) {
  const LagrangianSystem free{2, to_field(Expression::parse("0.5*(q1dot^2 + q2dot^2)", {"q1", "q2", "q1dot", "q2dot"}))};
  const Vec v = vec({0.6, -1.4});
  Trajectory g;
  for (double t : uniform_grid(10, 1.0)) {
    g.times.push_back(t);
    g.q.push_back(t * v);
    g.qdot.push_back(v);
  }
  const auto a = action_full(free, g);
  EXPECT_NEAR(a.value, 0.5 * v.squaredNorm(), 1e-15);
  EXPECT_EQ(a.rule, QuadratureRule::simpson);
  EXPECT_EQ(a.grid_size, 11u);
}

TEST(ActionFull, OscillatorClosedFormVanishes) {
  const auto s = builtin("harmonic-oscillator");
  Trajectory g;
  for (double t : uniform_grid(2000, 2 * std::numbers::pi)) {
    g.times.push_back(t);
    g.q.push_back(vec({std::cos(t), 0}));
    g.qdot.push_back(vec({-std::sin(t), 0}));
  }
  EXPECT_NEAR(action_full(*s.lagrangian, g).value, 0.0, 1e-12);
}

TEST(ActionReduced, ZeroRateIsPlainQuadrature) {
  const auto ell = builtin("jacobi-arctan").reduced();
  const auto r = line(100, 2.0, 0.3, 0.2, 0.0);
  EXPECT_DOUBLE_EQ(action_reduced(ell, r).value, action_standard_reduced(ell, r).value);
}

TEST(ActionReduced, LinearReducedLagrangianClosedForm) {
  const double c = 0.8, tau = 1.5;
  const auto r = line(2000, tau, 0.0, 0.0, c);
  EXPECT_NEAR(action_reduced(reduced("y"), r).value, std::exp(c * tau) - 1, 1e-12);
}

TEST(ActionStandardReduced, QuadraticOnLine) {
  const auto r = line(7, 3.0, 0.1, 0.4, -0.6);
  EXPECT_NEAR(action_standard_reduced(reduced("0.5*xdot^2 + 0.5*y^2"), r).value, 0.5 * (0.16 + 0.36) * 3.0, 1e-15);
}

TEST(ActionStandardReduced, FourthOrderUnderRefinement) {
  const auto s = builtin("planar-translation");
  const auto ell = s.reduced();
  const auto p = s.initial_reduced();
  auto act = [&](std::size_t n) { return action_standard_reduced(ell, integrate_std_lp(ell, p.x, p.xdot, p.y, {n, 10.0})).value; };
  const double a = act(100), b = act(200), c = act(400);
  const double ratio = (a - b) / (b - c);
  EXPECT_GT(ratio, 12.0);
  EXPECT_LT(ratio, 20.0);
}

TEST(Proportionality, RandomCurvesInQuadrant) {
  const auto s = builtin("jacobi-arctan");
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto rep = proportionality_check(*s.lagrangian, *s.scaling, oracle::QuadrantCurve(seed).sample(2000, 2.0));
    EXPECT_LE(rep.discrepancy, 1e-7) << seed;
  }
}

TEST(Proportionality, ConstantCurve) {
  const auto s = builtin("jacobi-arctan");
  const Vec q0 = vec({0.7, 1.1});
  Trajectory g;
  for (double t : uniform_grid(20, 2.0)) {
    g.times.push_back(t);
    g.q.push_back(q0);
    g.qdot.push_back(Vec::Zero(2));
  }
  const auto rep = proportionality_check(*s.lagrangian, *s.scaling, g);
  EXPECT_LE(rep.discrepancy, 1e-12);
  const auto fw = atiyah_forward(*s.scaling, q0, Vec::Zero(2));
  EXPECT_NEAR(rep.sigma * rep.reduced_action, 2.0 * s.scaling->scaling(q0) * s.reduced()(fw.x, fw.xdot, fw.y), 1e-14);
}

TEST(Proportionality, ActionIsHomogeneousOfDegreeOne) {
  const auto s = builtin("jacobi-arctan");
  const auto g = oracle::QuadrantCurve(4).sample(400, 2.0);
  const double s0 = 2.7;
  Trajectory scaled = g;
  for (std::size_t i = 0; i < g.samples(); ++i) {
    scaled.q[i] = s.scaling->act(s0, g.q[i]);
    scaled.qdot[i] = tangent_lift(*s.scaling, s0, g.q[i], g.qdot[i]);
  }
  EXPECT_NEAR(action_full(*s.lagrangian, scaled).value, s0 * action_full(*s.lagrangian, g).value, 1e-12);
}

TEST(SampleVariation, EndpointsAndZeroMean) {
  const auto t = uniform_grid(200, 2.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto h = sample_variation(VariationClass::hamilton, t, 2, seed);
    EXPECT_EQ(h.delta.front(), Vec::Zero(2));
    EXPECT_EQ(h.delta.back(), Vec::Zero(2));
    EXPECT_TRUE(h.delta_y.empty());

    const auto r = sample_variation(VariationClass::reduced, t, 1, seed);
    EXPECT_EQ(r.delta.front()[0], 0.0);
    EXPECT_EQ(r.delta.back()[0], 0.0);
    EXPECT_EQ(r.eta.front(), 0.0);
    EXPECT_EQ(r.eta.back(), 0.0);
    EXPECT_LE(std::abs(integrate(r.delta_y, 0.01)), 1e-12);
  }
  const auto odd = uniform_grid(201, 2.0);
  EXPECT_LE(std::abs(integrate(sample_variation(VariationClass::reduced, odd, 1, 3).delta_y, 2.0 / 201)), 1e-12);
}

TEST(SampleVariation, SingleModeMatchesSineBump) {
  const auto t = uniform_grid(100, 3.0);
  const auto r = sample_variation(VariationClass::reduced, t, 1, 9, 1);
  const double amp = r.eta[50];
  for (std::size_t j = 1; j + 1 < t.size(); ++j) {
    EXPECT_NEAR(r.eta[j], amp * std::sin(std::numbers::pi * t[j] / 3.0), 1e-14);
    EXPECT_NEAR(r.delta_y[j], amp * std::numbers::pi / 3.0 * std::cos(std::numbers::pi * t[j] / 3.0), 1e-14);
  }
}

TEST(SampleVariation, DerivativesAreExact) {
  const auto t = uniform_grid(400, 2.0);
  const auto v = sample_variation(VariationClass::hamilton, t, 2, 5);
  std::vector<double> c0;
  for (const auto& d : v.delta) c0.push_back(d[0]);
  const auto fd = differentiate(c0, 2.0 / 400);
  for (std::size_t j = 1; j + 1 < t.size(); ++j) EXPECT_NEAR(fd[j], v.delta_dot[j][0], 1e-3);
}

TEST(SampleVariation, DistinctSeedsDiffer) {
  const auto t = uniform_grid(50, 1.0);
  const auto a = sample_variation(VariationClass::reduced, t, 1, 1);
  const auto b = sample_variation(VariationClass::reduced, t, 1, 2);
  EXPECT_NE(a.delta_y, b.delta_y);
  EXPECT_NE(a.delta[10], b.delta[10]);
  const auto a2 = sample_variation(VariationClass::reduced, t, 1, 1);
  EXPECT_EQ(a.delta_y, a2.delta_y);
}

TEST(SampleVariation, TooShortGrid) {
  EXPECT_THROW(sample_variation(VariationClass::hamilton, {0.0, 0.5, 1.0}, 1, 1), DimensionError);
}

TEST(LocalizedBump, ZeroMeanAndSupport) {
  const double t0 = 1.1, eps = 0.25;
  const auto t = uniform_grid(4000, 2.0);
  std::vector<double> v;
  for (double s : t) v.push_back(bump(s, t0, eps));
  EXPECT_LE(std::abs(integrate(v, 2.0 / 4000)), 1e-9);
  for (std::size_t j = 0; j < t.size(); ++j)
    if (std::abs(t[j] - t0) > eps) EXPECT_EQ(v[j], 0.0);
  EXPECT_GT(bump(t0 - eps / 2, t0, eps), 0.99);
}

TEST(FirstVariation, OscillatorSolutionIsCritical) {
  const auto s = builtin("harmonic-oscillator");
  const auto g = integrate_el(*s.lagrangian, *s.initial.q, *s.initial.qdot, {2000, 1.0});
  const auto b = hamilton_battery(*s.lagrangian, g, 50, 1);
  EXPECT_TRUE(b.pass()) << b.max_abs() << " > " << b.threshold();
  EXPECT_EQ(b.values.size(), 50u);
}

TEST(FirstVariation, QuadrantReducedSolutionIsCritical) {
  const auto s = builtin("jacobi-arctan");
  const auto b = reduced_battery(s.reduced(), jacobi_reduced_solution(2000), 50, 1);
  EXPECT_TRUE(b.pass()) << b.max_abs() << " > " << b.threshold();
}

TEST(FirstVariation, StraightLineIsNotCritical) {
  const auto s = builtin("jacobi-arctan");
  const auto b = reduced_battery(s.reduced(), line(2000, 2.0, std::numbers::pi / 4, 0.25, 0.5), 10, 1);
  EXPECT_GT(b.max_abs(), 1e-3);
}

TEST(FirstVariation, LinearInTheVariation) {
  const auto s = builtin("jacobi-arctan");
  const auto g = oracle::QuadrantCurve(2).sample(400, 2.0);
  const auto v1 = sample_variation(VariationClass::hamilton, g.times, 2, 1);
  const auto v2 = sample_variation(VariationClass::hamilton, g.times, 2, 2);
  const double a = 0.7, b = -1.3;
  const double lhs = first_variation(*s.lagrangian, g, v1.combine(a, v2, b));
  const double rhs = a * first_variation(*s.lagrangian, g, v1) + b * first_variation(*s.lagrangian, g, v2);
  EXPECT_NEAR(lhs, rhs, 1e-8 * (1 + std::abs(rhs)));

  const auto ell = s.reduced();
  const auto r = project_trajectory(*s.scaling, g);
  const auto w1 = sample_variation(VariationClass::reduced, r.times, 1, 1);
  const auto w2 = sample_variation(VariationClass::reduced, r.times, 1, 2);
  const double lr = first_variation(ell, r, w1.combine(a, w2, b));
  const double rr = a * first_variation(ell, r, w1) + b * first_variation(ell, r, w2);
  EXPECT_NEAR(lr, rr, 1e-8 * (1 + std::abs(rr)));
}

TEST(FirstVariation, ClassMismatchIsRejected) {
  const auto s = builtin("jacobi-arctan");
  const auto g = jacobi_solution(100);
  const auto v = sample_variation(VariationClass::reduced, g.times, 2, 1);
  EXPECT_ANY_THROW(first_variation(*s.lagrangian, g, v));
}

TEST(FirstVariation, ShrinksUnderRefinement) {
  const auto s = builtin("jacobi-arctan");
  const auto coarse = hamilton_battery(*s.lagrangian, jacobi_solution(50), 5, 1);
  const auto fine = hamilton_battery(*s.lagrangian, jacobi_solution(100), 5, 1);
  EXPECT_GE(coarse.max_abs() / fine.max_abs(), 2.0);

  const auto rc = reduced_battery(s.reduced(), jacobi_reduced_solution(50), 5, 1);
  const auto rf = reduced_battery(s.reduced(), jacobi_reduced_solution(100), 5, 1);
  EXPECT_GE(rc.max_abs() / rf.max_abs(), 2.0);
}

TEST(Reports, JsonCarriesVerdict) {
  const auto s = builtin("jacobi-arctan");
  const auto b = reduced_battery(s.reduced(), jacobi_reduced_solution(200), 3, 7);
  const auto j = to_json(b);
  EXPECT_EQ(j.at("principle"), "reduced");
  EXPECT_EQ(j.at("per_seed").size(), 3u);
  EXPECT_EQ(j.at("pass").get<bool>(), b.pass());
  const auto p = to_json(proportionality_check(*s.lagrangian, *s.scaling, jacobi_solution(100)));
  EXPECT_TRUE(p.contains("discrepancy"));
}
