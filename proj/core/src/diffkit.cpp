#include "scalred/diffkit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace scalred {

namespace {

void require_finite(double v, std::size_t coordinate, const char* what) {
  if (!std::isfinite(v)) {
    throw NumericError(std::string("non-finite ") + what + " in coordinate " + std::to_string(coordinate));
  }
}

void require_length(const Vec& point, std::size_t expected) {
  if (static_cast<std::size_t>(point.size()) != expected) {
    throw DimensionError("point has length " + std::to_string(point.size()) + ", field expects " +
                         std::to_string(expected));
  }
}

std::vector<HyperDual> seeded(const Vec& point) {
  std::vector<HyperDual> in(static_cast<std::size_t>(point.size()));
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = HyperDual(point[static_cast<Eigen::Index>(i)]);
  return in;
}

}  // namespace

void ScalarField::check_arity(std::size_t n) const {
  if (!dual_) throw Error("evaluating an empty ScalarField");
  if (n != arity_) {
    throw DimensionError("scalar field of arity " + std::to_string(arity_) + " called with " + std::to_string(n) +
                         " inputs");
  }
}

double ScalarField::operator()(std::span<const double> in) const {
  check_arity(in.size());
  return real_(in);
}

HyperDual ScalarField::operator()(std::span<const HyperDual> in) const {
  check_arity(in.size());
  return dual_(in);
}

NestedDual ScalarField::operator()(std::span<const NestedDual> in) const {
  check_arity(in.size());
  if (!nested_) throw Error("scalar field does not support nested hyper-dual evaluation");
  return nested_(in);
}

void VectorField::check(std::size_t n, std::size_t produced) const {
  if (n != in_) {
    throw DimensionError("map of input dimension " + std::to_string(in_) + " called with " + std::to_string(n) +
                         " inputs");
  }
  if (produced != out_) {
    throw DimensionError("map declared output dimension " + std::to_string(out_) + " but produced " +
                         std::to_string(produced));
  }
}

std::vector<double> VectorField::operator()(std::span<const double> in) const {
  if (!real_) throw Error("evaluating an empty VectorField");
  auto out = real_(in);
  check(in.size(), out.size());
  return out;
}

std::vector<HyperDual> VectorField::operator()(std::span<const HyperDual> in) const {
  if (!dual_) throw Error("evaluating an empty VectorField");
  auto out = dual_(in);
  check(in.size(), out.size());
  return out;
}

std::vector<NestedDual> VectorField::operator()(std::span<const NestedDual> in) const {
  if (!nested_) throw Error("map does not support nested hyper-dual evaluation");
  auto out = nested_(in);
  check(in.size(), out.size());
  return out;
}

Vec VectorField::operator()(const Vec& in) const {
  auto out = (*this)(std::span<const double>(in.data(), static_cast<std::size_t>(in.size())));
  return Eigen::Map<const Vec>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Vec gradient(const ScalarField& field, const Vec& point) {
  require_length(point, field.arity());
  const std::size_t m = field.arity();
  Vec g(static_cast<Eigen::Index>(m));
  auto in = seeded(point);
  for (std::size_t i = 0; i < m; ++i) {
    in[i].e1 = 1.0;
    const HyperDual r = field(std::span<const HyperDual>(in));
    in[i].e1 = 0.0;
    require_finite(r.e1, i, "gradient");
    g[static_cast<Eigen::Index>(i)] = r.e1;
  }
  return g;
}

SecondOrderExpansion expand(const ScalarField& field, const Vec& point) {
  require_length(point, field.arity());
  const auto m = static_cast<Eigen::Index>(field.arity());
  SecondOrderExpansion out;
  out.gradient = Vec::Zero(m);
  Mat raw(m, m);
  auto in = seeded(point);
  if (m == 0) {
    out.value = field(std::span<const HyperDual>(in)).re;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      in[static_cast<std::size_t>(i)].e1 = 1.0;
      in[static_cast<std::size_t>(j)].e2 = 1.0;
      const HyperDual r = field(std::span<const HyperDual>(in));
      in[static_cast<std::size_t>(i)].e1 = 0.0;
      in[static_cast<std::size_t>(j)].e2 = 0.0;
      require_finite(r.e12, static_cast<std::size_t>(i), "Hessian entry");
      raw(i, j) = r.e12;
      if (j == 0) {
        require_finite(r.e1, static_cast<std::size_t>(i), "gradient");
        out.gradient[i] = r.e1;
        out.value = r.re;
      }
    }
  }
  double asym = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double scale = std::max({1.0, std::abs(raw(i, j)), std::abs(raw(j, i))});
      asym = std::max(asym, std::abs(raw(i, j) - raw(j, i)) / scale);
    }
  }
  out.hessian.matrix = 0.5 * (raw + raw.transpose());
  out.hessian.asymmetry = asym;
  return out;
}

Hessian hessian(const ScalarField& field, const Vec& point) { return expand(field, point).hessian; }

Mat jacobian(const VectorField& map, const Vec& point) {
  require_length(point, map.in_dim());
  const auto m = static_cast<Eigen::Index>(map.in_dim());
  const auto k = static_cast<Eigen::Index>(map.out_dim());
  Mat J(k, m);
  auto in = seeded(point);
  for (Eigen::Index i = 0; i < m; ++i) {
    in[static_cast<std::size_t>(i)].e1 = 1.0;
    const auto out = map(std::span<const HyperDual>(in));
    in[static_cast<std::size_t>(i)].e1 = 0.0;
    for (Eigen::Index r = 0; r < k; ++r) {
      require_finite(out[static_cast<std::size_t>(r)].e1, static_cast<std::size_t>(i), "Jacobian entry");
      J(r, i) = out[static_cast<std::size_t>(r)].e1;
    }
  }
  return J;
}

Vec jvp(const VectorField& map, const Vec& point, const Vec& direction) {
  require_length(point, map.in_dim());
  require_length(direction, map.in_dim());
  auto in = seeded(point);
  for (std::size_t i = 0; i < in.size(); ++i) in[i].e1 = direction[static_cast<Eigen::Index>(i)];
  const auto out = map(std::span<const HyperDual>(in));
  Vec r(static_cast<Eigen::Index>(out.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    require_finite(out[i].e1, i, "tangent component");
    r[static_cast<Eigen::Index>(i)] = out[i].e1;
  }
  return r;
}

double directional(const ScalarField& field, const Vec& point, const Vec& direction) {
  require_length(point, field.arity());
  require_length(direction, field.arity());
  auto in = seeded(point);
  for (std::size_t i = 0; i < in.size(); ++i) in[i].e1 = direction[static_cast<Eigen::Index>(i)];
  const HyperDual r = field(std::span<const HyperDual>(in));
  require_finite(r.e1, 0, "directional derivative");
  return r.e1;
}

}  // namespace scalred
