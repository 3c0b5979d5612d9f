#include "scalred/variational.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "scalred/sampling.hpp"

namespace scalred {

namespace {

void require_class(const VariationField& v, VariationClass expected, std::size_t samples) {
  if (v.kind != expected) {
    throw std::invalid_argument(std::string("variation of class ") + to_string(v.kind) + " used with the " +
                                to_string(expected) + " principle");
  }
  if (v.delta.size() != samples || v.delta_dot.size() != samples) {
    throw DimensionError("variation grid does not match the trajectory grid");
  }
  if (expected == VariationClass::reduced && v.delta_y.size() != samples) {
    throw DimensionError("reduced variation lacks delta-y samples");
  }
}

void require_finite(double v) {
  if (!std::isfinite(v)) throw NumericError("first variation is not finite");
}

Trajectory perturbed(const Trajectory& g, const VariationField& v, double h) {
  Trajectory p = g;
  for (std::size_t i = 0; i < g.samples(); ++i) {
    p.q[i] += h * v.delta[i];
    p.qdot[i] += h * v.delta_dot[i];
  }
  return p;
}

ReducedTrajectory perturbed(const ReducedTrajectory& r, const VariationField& v, double h) {
  ReducedTrajectory p = r;
  for (std::size_t i = 0; i < r.samples(); ++i) {
    p.x[i] += h * v.delta[i];
    p.xdot[i] += h * v.delta_dot[i];
    p.y[i] += h * v.delta_y[i];
  }
  return p;
}

}  // namespace

const char* to_string(VariationClass c) { return c == VariationClass::hamilton ? "hamilton" : "reduced"; }

ActionValue action_full(const LagrangianSystem& L, const Trajectory& g) {
  g.validate();
  std::vector<double> integrand(g.samples());
  for (std::size_t i = 0; i < g.samples(); ++i) integrand[i] = L(g.q[i], g.qdot[i]);
  return {integrate(integrand, g.step()), rule_for(g.samples() - 1), g.samples()};
}

ActionValue action_reduced(const ReducedLagrangian& ell, const ReducedTrajectory& r) {
  r.validate();
  const auto Y = cumulative_integral(r.y, r.step());
  std::vector<double> integrand(r.samples());
  for (std::size_t i = 0; i < r.samples(); ++i) integrand[i] = std::exp(Y[i]) * ell(r.x[i], r.xdot[i], r.y[i]);
  return {integrate(integrand, r.step()), rule_for(r.samples() - 1), r.samples()};
}

ActionValue action_standard_reduced(const ReducedLagrangian& ell, const ReducedTrajectory& r) {
  r.validate();
  std::vector<double> integrand(r.samples());
  for (std::size_t i = 0; i < r.samples(); ++i) integrand[i] = ell(r.x[i], r.xdot[i], r.y[i]);
  return {integrate(integrand, r.step()), rule_for(r.samples() - 1), r.samples()};
}

VariationField VariationField::combine(double a, const VariationField& other, double b) const {
  if (other.kind != kind || other.times.size() != times.size()) {
    throw std::invalid_argument("cannot combine variations of different class or grid");
  }
  VariationField out = *this;
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.delta[i] = a * delta[i] + b * other.delta[i];
    out.delta_dot[i] = a * delta_dot[i] + b * other.delta_dot[i];
    if (!eta.empty()) out.eta[i] = a * eta[i] + b * other.eta[i];
    if (!delta_y.empty()) out.delta_y[i] = a * delta_y[i] + b * other.delta_y[i];
  }
  return out;
}

VariationField sample_variation(VariationClass kind, const std::vector<double>& times, std::size_t dim,
                                std::uint64_t seed, std::size_t modes) {
  if (times.size() < 4) throw DimensionError("variation grid needs at least four samples");
  if (modes < 1) throw std::invalid_argument("variation needs at least one mode");
  const double t0 = times.front();
  const double tau = times.back() - t0;
  if (!(tau > 0.0)) throw DimensionError("variation grid must be increasing");

  std::uint64_t state = seed ^ (kind == VariationClass::hamilton ? 0x68616dULL : 0x726564ULL);
  auto coefficient = [&state] { return 2.0 * uniform01(state) - 1.0; };
  Mat c(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(modes));
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index k = 0; k < c.cols(); ++k) c(i, k) = coefficient();
  std::vector<double> eta_coeff(modes);
  for (auto& e : eta_coeff) e = coefficient();

  VariationField v;
  v.kind = kind;
  v.times = times;
  v.seed = seed;
  const std::size_t last = times.size() - 1;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double u = std::numbers::pi * (times[j] - t0) / tau;
    Vec d = Vec::Zero(static_cast<Eigen::Index>(dim));
    Vec dd = Vec::Zero(static_cast<Eigen::Index>(dim));
    double eta = 0.0;
    double eta_dot = 0.0;
    for (std::size_t k = 0; k < modes; ++k) {
      const double w = static_cast<double>(k + 1);
      const double s = std::sin(w * u);
      const double co = std::cos(w * u) * w * std::numbers::pi / tau;
      for (Eigen::Index i = 0; i < d.size(); ++i) {
        d[i] += c(i, static_cast<Eigen::Index>(k)) * s;
        dd[i] += c(i, static_cast<Eigen::Index>(k)) * co;
      }
      eta += eta_coeff[k] * s;
      eta_dot += eta_coeff[k] * co;
    }
    if (j == 0 || j == last) {
      d.setZero();
      eta = 0.0;
    }
    v.delta.push_back(d);
    v.delta_dot.push_back(dd);
    if (kind == VariationClass::reduced) {
      v.eta.push_back(eta);
      v.delta_y.push_back(eta_dot);
    }
  }
  return v;
}

double first_variation(const LagrangianSystem& L, const Trajectory& g, const VariationField& v, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("perturbation step must be positive");
  require_class(v, VariationClass::hamilton, g.samples());
  const double plus = action_full(L, perturbed(g, v, h)).value;
  const double minus = action_full(L, perturbed(g, v, -h)).value;
  const double d = (plus - minus) / (2.0 * h);
  require_finite(d);
  return d;
}

double first_variation(const ReducedLagrangian& ell, const ReducedTrajectory& r, const VariationField& v, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("perturbation step must be positive");
  require_class(v, VariationClass::reduced, r.samples());
  const double plus = action_reduced(ell, perturbed(r, v, h)).value;
  const double minus = action_reduced(ell, perturbed(r, v, -h)).value;
  const double d = (plus - minus) / (2.0 * h);
  require_finite(d);
  return d;
}

ProportionalityReport proportionality_check(const LagrangianSystem& L, const ScalingSystem& sys,
                                            const ReducedLagrangian& ell, const Trajectory& g) {
  ProportionalityReport p;
  p.full_action = action_full(L, g).value;
  const ReducedTrajectory r = project_trajectory(sys, g);
  p.sigma = r.sigma;
  p.reduced_action = action_reduced(ell, r).value;
  p.discrepancy = std::abs(p.full_action - p.sigma * p.reduced_action) / (1.0 + std::abs(p.full_action));
  return p;
}

ProportionalityReport proportionality_check(const LagrangianSystem& L, const ScalingSystem& sys, const Trajectory& g) {
  return proportionality_check(L, sys, reduce_lagrangian(L, sys), g);
}

double VariationBattery::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double VariationBattery::threshold() const { return tolerance_scale * (1.0 + std::abs(action)); }

VariationBattery hamilton_battery(const LagrangianSystem& L, const Trajectory& g, std::size_t count,
                                  std::uint64_t first_seed, double h, double tolerance_scale) {
  VariationBattery b;
  b.principle = "hamilton";
  b.action = action_full(L, g).value;
  b.h = h;
  b.tolerance_scale = tolerance_scale;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = first_seed + i;
    const auto v = sample_variation(VariationClass::hamilton, g.times, L.dim, seed);
    b.seeds.push_back(seed);
    b.values.push_back(first_variation(L, g, v, h));
  }
  return b;
}

VariationBattery reduced_battery(const ReducedLagrangian& ell, const ReducedTrajectory& r, std::size_t count,
                                 std::uint64_t first_seed, double h, double tolerance_scale) {
  VariationBattery b;
  b.principle = "reduced";
  b.action = action_reduced(ell, r).value;
  b.h = h;
  b.tolerance_scale = tolerance_scale;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = first_seed + i;
    const auto v = sample_variation(VariationClass::reduced, r.times, ell.base_dim, seed);
    b.seeds.push_back(seed);
    b.values.push_back(first_variation(ell, r, v, h));
  }
  return b;
}

nlohmann::json to_json(const VariationBattery& b) {
  nlohmann::json j;
  j["principle"] = b.principle;
  j["action"] = b.action;
  j["h"] = b.h;
  j["tolerance"] = b.threshold();
  j["max_abs"] = b.max_abs();
  j["pass"] = b.pass();
  j["per_seed"] = nlohmann::json::array();
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    j["per_seed"].push_back({{"seed", b.seeds[i]}, {"first_variation", b.values[i]}});
  }
  return j;
}

nlohmann::json to_json(const ProportionalityReport& p) {
  return {{"full_action", p.full_action},
          {"sigma", p.sigma},
          {"reduced_action", p.reduced_action},
          {"discrepancy", p.discrepancy}};
}

}  // namespace scalred
