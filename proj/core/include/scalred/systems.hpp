#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scalred/diffkit.hpp"
#include "scalred/sampling.hpp"

namespace scalred {

/// L(q, qdot) on a configuration chart of dimension `dim`; the field takes
/// the 2*dim inputs (q, qdot).
struct LagrangianSystem {
  std::size_t dim = 0;
  ScalarField lagrangian;

  double operator()(const Vec& q, const Vec& qdot) const;
  Vec state(const Vec& q, const Vec& qdot) const;
};

/// A principal R+ action together with the trivialization it induces.
///
/// psi:      (s, q)     -> psi_s(q)          in_dim 1+n, out_dim n
/// f:        q          -> f(q) > 0          f(psi_s q) = s f(q)
/// pi:       q          -> x                 out_dim n-1
/// triv_inv: (x, sigma) -> q                 inverse of q -> (pi(q), f(q))
/// generator (optional): q -> Delta_q, the infinitesimal generator.
/// domain (optional): q -> values that must all be strictly positive for q
///   to lie in the chart.
struct ScalingSystem {
  std::size_t ambient_dim = 0;
  std::size_t base_dim = 0;
  VectorField psi;
  ScalarField f;
  VectorField pi;
  VectorField triv_inv;
  std::optional<VectorField> generator;
  std::optional<VectorField> domain;

  bool in_chart(const Vec& q) const;
  /// ChartError if q is outside the chart or f(q) <= 0.
  void require_chart(const Vec& q) const;

  Vec act(double s, const Vec& q) const;
  double scaling(const Vec& q) const;
  Vec project(const Vec& q) const;
  Vec lift(const Vec& x, double sigma) const;

  /// Checks that all declared dimensions agree with each other.
  void check_dimensions() const;
};

struct ValidationReport {
  std::string check;
  double max_abs = 0.0;
  double max_rel = 0.0;
  /// Sample coordinates at which max_rel was attained.
  Vec worst_point;
  double tolerance = 1e-9;
  bool pass = true;
  /// Samples skipped because they fell outside the chart.
  std::size_t skipped = 0;
};

/// (psi_s)_{*,q}(v).
Vec tangent_lift(const ScalingSystem& sys, double s, const Vec& q, const Vec& v);

/// L(psi_s q, (psi_s)_* v) = s L(q, v) on samples (q in box, v in [-1,1]^n,
/// s log-uniform in the box's scale range).
ValidationReport check_homogeneity(const LagrangianSystem& L, const ScalingSystem& sys, const SamplingBox& box,
                                   double tolerance = 1e-9);

/// One report per standing hypothesis on the scaling structure:
/// scaling-positivity, scaling-function, projection-invariance,
/// trivialization-inverse, trivialization-formula and (when a generator is
/// supplied) generator-identity.
std::vector<ValidationReport> check_scaling_structure(const ScalingSystem& sys, const SamplingBox& box,
                                                      double tolerance = 1e-9);

/// |a - b| / max(1, |a|, |b|): relative for values above unity, absolute
/// below.
double relative_residual(double a, double b);

}  // namespace scalred
