#pragma once

// Smooth scalar fields and maps evaluable on reals, hyper-duals and nested
// hyper-duals, plus exact gradient / Hessian / Jacobian drivers.

#include <Eigen/Dense>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "scalred/errors.hpp"
#include "scalred/hyperdual.hpp"

namespace scalred {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Smooth map R^m -> R. Holds one evaluator per supported scalar type; a
/// field built from a generic callable supports all of them.
class ScalarField {
 public:
  template <class T>
  using Evaluator = std::function<T(std::span<const T>)>;

  ScalarField() = default;

  /// Wraps a generic callable `f(std::span<const T>) -> T`.
  template <class F>
  static ScalarField generic(std::size_t arity, F f) {
    ScalarField s;
    s.arity_ = arity;
    s.real_ = [f](std::span<const double> in) { return f(in); };
    s.dual_ = [f](std::span<const HyperDual> in) { return f(in); };
    s.nested_ = [f](std::span<const NestedDual> in) { return f(in); };
    return s;
  }

  /// Field that can only be differentiated up to second order. The real
  /// evaluator runs the hyper-dual one with zero seeds.
  static ScalarField second_order(std::size_t arity, Evaluator<double> real, Evaluator<HyperDual> dual) {
    ScalarField s;
    s.arity_ = arity;
    s.real_ = std::move(real);
    s.dual_ = std::move(dual);
    return s;
  }

  std::size_t arity() const noexcept { return arity_; }
  bool supports_nested() const noexcept { return static_cast<bool>(nested_); }
  explicit operator bool() const noexcept { return static_cast<bool>(dual_); }

  double operator()(std::span<const double> in) const;
  HyperDual operator()(std::span<const HyperDual> in) const;
  NestedDual operator()(std::span<const NestedDual> in) const;
  double operator()(const Vec& in) const { return (*this)(std::span<const double>(in.data(), in.size())); }

 private:
  void check_arity(std::size_t n) const;

  std::size_t arity_ = 0;
  Evaluator<double> real_;
  Evaluator<HyperDual> dual_;
  Evaluator<NestedDual> nested_;
};

/// Smooth map R^m -> R^k.
class VectorField {
 public:
  template <class T>
  using Evaluator = std::function<std::vector<T>(std::span<const T>)>;

  VectorField() = default;

  template <class F>
  static VectorField generic(std::size_t in_dim, std::size_t out_dim, F f) {
    VectorField s;
    s.in_ = in_dim;
    s.out_ = out_dim;
    s.real_ = [f](std::span<const double> in) { return f(in); };
    s.dual_ = [f](std::span<const HyperDual> in) { return f(in); };
    s.nested_ = [f](std::span<const NestedDual> in) { return f(in); };
    return s;
  }

  std::size_t in_dim() const noexcept { return in_; }
  std::size_t out_dim() const noexcept { return out_; }
  explicit operator bool() const noexcept { return static_cast<bool>(dual_); }

  std::vector<double> operator()(std::span<const double> in) const;
  std::vector<HyperDual> operator()(std::span<const HyperDual> in) const;
  std::vector<NestedDual> operator()(std::span<const NestedDual> in) const;
  Vec operator()(const Vec& in) const;

 private:
  void check(std::size_t n, std::size_t produced) const;

  std::size_t in_ = 0;
  std::size_t out_ = 0;
  Evaluator<double> real_;
  Evaluator<HyperDual> dual_;
  Evaluator<NestedDual> nested_;
};

struct Hessian {
  Mat matrix;
  /// Largest |H_ij - H_ji| relative to max(1, |H_ij|) before symmetrization.
  double asymmetry = 0.0;
  bool asymmetric() const noexcept { return asymmetry > 1e-10; }
};

/// Value, gradient and Hessian from a single sweep of m^2 hyper-dual passes.
struct SecondOrderExpansion {
  double value = 0.0;
  Vec gradient;
  Hessian hessian;
};

Vec gradient(const ScalarField& field, const Vec& point);
Hessian hessian(const ScalarField& field, const Vec& point);
SecondOrderExpansion expand(const ScalarField& field, const Vec& point);
Mat jacobian(const VectorField& map, const Vec& point);
/// Jacobian-vector product in one pass.
Vec jvp(const VectorField& map, const Vec& point, const Vec& direction);
/// Directional derivative of a scalar field in one pass.
double directional(const ScalarField& field, const Vec& point, const Vec& direction);

}  // namespace scalred
