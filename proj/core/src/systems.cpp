#include "scalred/systems.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace scalred {

double LagrangianSystem::operator()(const Vec& q, const Vec& qdot) const { return lagrangian(state(q, qdot)); }

Vec LagrangianSystem::state(const Vec& q, const Vec& qdot) const {
  if (static_cast<std::size_t>(q.size()) != dim || static_cast<std::size_t>(qdot.size()) != dim) {
    throw DimensionError("Lagrangian expects configuration and velocity of dimension " + std::to_string(dim));
  }
  Vec z(2 * q.size());
  z << q, qdot;
  return z;
}

bool ScalingSystem::in_chart(const Vec& q) const {
  if (static_cast<std::size_t>(q.size()) != ambient_dim) return false;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (!std::isfinite(q[i])) return false;
  }
  if (domain) {
    const Vec d = (*domain)(q);
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (!(d[i] > 0.0)) return false;
    }
  }
  return true;
}

void ScalingSystem::require_chart(const Vec& q) const {
  if (!in_chart(q)) throw ChartError("configuration leaves the chart domain");
  const double fq = f(q);
  if (!(fq > 0.0)) throw ChartError("scaling function is not positive (f = " + std::to_string(fq) + ")");
}

Vec ScalingSystem::act(double s, const Vec& q) const {
  if (!(s > 0.0)) throw ChartError("scaling action requires a positive group element");
  Vec in(q.size() + 1);
  in << s, q;
  return psi(in);
}

double ScalingSystem::scaling(const Vec& q) const { return f(q); }

Vec ScalingSystem::project(const Vec& q) const { return pi(q); }

Vec ScalingSystem::lift(const Vec& x, double sigma) const {
  if (!(sigma > 0.0)) throw ChartError("fiber coordinate must be positive");
  Vec in(x.size() + 1);
  in << x, sigma;
  return triv_inv(in);
}

void ScalingSystem::check_dimensions() const {
  auto fail = [](const std::string& what) { throw DimensionError("scaling system: " + what); };
  if (ambient_dim < 1) fail("ambient dimension must be positive");
  if (base_dim + 1 != ambient_dim) fail("base dimension must be ambient dimension minus one");
  if (psi.in_dim() != ambient_dim + 1 || psi.out_dim() != ambient_dim) fail("psi must map (s, q) to q");
  if (f.arity() != ambient_dim) fail("f must take the configuration");
  if (pi.in_dim() != ambient_dim || pi.out_dim() != base_dim) fail("pi must map q to the base chart");
  if (triv_inv.in_dim() != base_dim + 1 || triv_inv.out_dim() != ambient_dim) fail("triv_inv must map (x, sigma) to q");
  if (generator && (generator->in_dim() != ambient_dim || generator->out_dim() != ambient_dim))
    fail("generator must be a vector field on the configuration chart");
  if (domain && domain->in_dim() != ambient_dim) fail("domain constraints must take the configuration");
}

Vec tangent_lift(const ScalingSystem& sys, double s, const Vec& q, const Vec& v) {
  if (!(s > 0.0)) throw ChartError("tangent lift requires a positive group element");
  sys.require_chart(q);
  if (v.size() != q.size()) throw DimensionError("tangent vector and base point differ in dimension");
  Vec point(q.size() + 1);
  point << s, q;
  Vec dir(q.size() + 1);
  dir << 0.0, v;
  return jvp(sys.psi, point, dir);
}

double relative_residual(double a, double b) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

namespace {

class ReportBuilder {
 public:
  ReportBuilder(std::string name, double tolerance) {
    report_.check = std::move(name);
    report_.tolerance = tolerance;
  }

  void record(double a, double b, const Vec& where) {
    const double abs_res = std::abs(a - b);
    const double rel = relative_residual(a, b);
    note(abs_res, std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity(), where);
  }

  void note(double abs_res, double rel, const Vec& where) {
    report_.max_abs = std::max(report_.max_abs, abs_res);
    if (report_.worst_point.size() == 0 || rel > report_.max_rel) report_.worst_point = where;
    report_.max_rel = std::max(report_.max_rel, rel);
  }

  void failure(const Vec& where) {
    note(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), where);
  }

  void skip() { ++report_.skipped; }

  ValidationReport finish() {
    report_.pass = report_.max_rel <= report_.tolerance;
    return report_;
  }

 private:
  ValidationReport report_;
};

Vec to_box(const std::vector<double>& u, std::size_t offset, const Vec& lower, const Vec& upper) {
  Vec q(lower.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    q[i] = lower[i] + u[offset + static_cast<std::size_t>(i)] * (upper[i] - lower[i]);
  }
  return q;
}

double log_uniform(double u, const SamplingBox& box) {
  const double a = std::log(box.scale_min);
  const double b = std::log(box.scale_max);
  return std::exp(a + u * (b - a));
}

Vec concat(const Vec& a, const Vec& b) {
  Vec r(a.size() + b.size());
  r << a, b;
  return r;
}

Vec with_scalar(const Vec& a, double s) {
  Vec r(a.size() + 1);
  r << a, s;
  return r;
}

// Runs `body` on each sample; sample-level library errors count as an
// infinite residual at that sample.
template <class Body>
void for_each_sample(const SamplingBox& box, std::size_t extra_dims, std::uint64_t salt, ReportBuilder& rb,
                     const ScalingSystem& sys, Body body) {
  const std::size_t n = static_cast<std::size_t>(box.lower.size());
  QuasiRandom qr(n + extra_dims, box.seed ^ salt);
  for (std::size_t k = 0; k < box.count; ++k) {
    const auto u = qr.next();
    const Vec q = to_box(u, 0, box.lower, box.upper);
    if (!sys.in_chart(q)) {
      rb.skip();
      continue;
    }
    try {
      body(q, u);
    } catch (const Error&) {
      rb.failure(q);
    }
  }
}

}  // namespace

ValidationReport check_homogeneity(const LagrangianSystem& L, const ScalingSystem& sys, const SamplingBox& box,
                                   double tolerance) {
  sys.check_dimensions();
  if (L.dim != sys.ambient_dim) throw DimensionError("Lagrangian and scaling system differ in dimension");
  box.validate(sys.ambient_dim);
  const std::size_t n = sys.ambient_dim;
  ReportBuilder rb("homogeneity", tolerance);
  for_each_sample(box, n + 1, 0x686f6d6fULL, rb, sys, [&](const Vec& q, const std::vector<double>& u) {
    Vec v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v[static_cast<Eigen::Index>(i)] = 2.0 * u[n + i] - 1.0;
    const double s = log_uniform(u[2 * n], box);
    const Vec sq = sys.act(s, q);
    const Vec sv = tangent_lift(sys, s, q, v);
    const double lhs = L(sq, sv);
    const double rhs = s * L(q, v);
    rb.record(lhs, rhs, with_scalar(concat(q, v), s));
  });
  return rb.finish();
}

std::vector<ValidationReport> check_scaling_structure(const ScalingSystem& sys, const SamplingBox& box,
                                                      double tolerance) {
  sys.check_dimensions();
  box.validate(sys.ambient_dim);
  std::vector<ValidationReport> reports;

  {
    ReportBuilder rb("scaling-positivity", tolerance);
    for_each_sample(box, 0, 0x706f73ULL, rb, sys, [&](const Vec& q, const std::vector<double>&) {
      const double fq = sys.scaling(q);
      rb.note(std::max(0.0, -fq), fq > 0.0 ? 0.0 : 1.0, q);
    });
    reports.push_back(rb.finish());
  }
  {
    ReportBuilder rb("scaling-function", tolerance);
    for_each_sample(box, 1, 0x736666ULL, rb, sys, [&](const Vec& q, const std::vector<double>& u) {
      const double s = log_uniform(u[sys.ambient_dim], box);
      rb.record(sys.scaling(sys.act(s, q)), s * sys.scaling(q), with_scalar(q, s));
    });
    reports.push_back(rb.finish());
  }
  {
    ReportBuilder rb("projection-invariance", tolerance);
    for_each_sample(box, 1, 0x70726fULL, rb, sys, [&](const Vec& q, const std::vector<double>& u) {
      const double s = log_uniform(u[sys.ambient_dim], box);
      const Vec a = sys.project(sys.act(s, q));
      const Vec b = sys.project(q);
      for (Eigen::Index i = 0; i < a.size(); ++i) rb.record(a[i], b[i], with_scalar(q, s));
    });
    reports.push_back(rb.finish());
  }
  {
    ReportBuilder rb("trivialization-inverse", tolerance);
    for_each_sample(box, 1, 0x696e76ULL, rb, sys, [&](const Vec& q, const std::vector<double>& u) {
      const double sigma = log_uniform(u[sys.ambient_dim], box);
      const Vec x = sys.project(q);
      const Vec lifted = sys.lift(x, sigma);
      const Vec where = with_scalar(x, sigma);
      if (!sys.in_chart(lifted)) {
        rb.failure(where);
        return;
      }
      const Vec xb = sys.project(lifted);
      for (Eigen::Index i = 0; i < x.size(); ++i) rb.record(xb[i], x[i], where);
      rb.record(sys.scaling(lifted), sigma, where);
    });
    reports.push_back(rb.finish());
  }
  {
    ReportBuilder rb("trivialization-formula", tolerance);
    for_each_sample(box, 1, 0x666f72ULL, rb, sys, [&](const Vec& q, const std::vector<double>& u) {
      const double sigma = log_uniform(u[sys.ambient_dim], box);
      const Vec a = sys.lift(sys.project(q), sigma);
      const Vec b = sys.act(sigma / sys.scaling(q), q);
      for (Eigen::Index i = 0; i < a.size(); ++i) rb.record(a[i], b[i], with_scalar(q, sigma));
    });
    reports.push_back(rb.finish());
  }
  if (sys.generator) {
    ReportBuilder rb("generator-identity", tolerance);
    for_each_sample(box, 0, 0x67656eULL, rb, sys, [&](const Vec& q, const std::vector<double>&) {
      const Vec delta = (*sys.generator)(q);
      rb.record(directional(sys.f, q, delta), sys.scaling(q), q);
    });
    reports.push_back(rb.finish());
  }
  return reports;
}

}  // namespace scalred
