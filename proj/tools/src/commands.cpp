#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "cli.hpp"
#include "context.hpp"
#include "scalred/trajectory_io.hpp"
#include "scalred/variational.hpp"

namespace scalred::cli {

namespace {

using nlohmann::json;

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json report_json(const ValidationReport& r) {
  return {{"check", r.check},   {"max_abs", r.max_abs},     {"max_rel", r.max_rel},
          {"tolerance", r.tolerance}, {"pass", r.pass}, {"skipped", r.skipped},
          {"worst_point", vec_json(r.worst_point)}};
}

Metadata csv_meta(const Context& ctx) {
  Metadata m{{"scenario", ctx.scenario.name}, {"command", ctx.command}};
  if (!ctx.options.mode.empty()) m.emplace_back("mode", ctx.options.mode);
  m.emplace_back("steps", std::to_string(ctx.scenario.integrator.steps));
  m.emplace_back("horizon", format_number(ctx.scenario.integrator.horizon));
  return m;
}

template <class Traj>
std::string write_trajectory(const Context& ctx, const std::string& suffix, const Traj& t,
                             const std::vector<std::string>& names) {
  const auto p = ctx.path(suffix);
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  write_csv(f, t, names, csv_meta(ctx));
  return p.filename().string();
}

const LagrangianSystem& need_lagrangian(const Scenario& s) {
  if (!s.lagrangian) throw UsageError("scenario '" + s.name + "' has no Lagrangian");
  return *s.lagrangian;
}

const ScalingSystem& need_scaling(const Scenario& s) {
  if (!s.scaling) throw UsageError("scenario '" + s.name + "' has no scaling structure");
  return *s.scaling;
}

struct FullStart {
  Vec q;
  Vec qdot;
};

FullStart need_full_initial(const Scenario& s) {
  if (!s.initial.q) throw UsageError("scenario '" + s.name + "' has no initial (q, qdot)");
  return {*s.initial.q, *s.initial.qdot};
}

double initial_sigma(const Scenario& s) {
  if (s.scaling && s.initial.q) return s.scaling->scaling(*s.initial.q);
  return 1.0;
}

std::string verdict(bool pass) { return pass ? "pass" : "FAIL"; }

// Probe curves shared by compare-herglotz.
struct Probe {
  std::string name;
  ReducedTrajectory curve;
};

std::vector<Probe> probe_family(const Scenario& s) {
  const auto start = s.initial_reduced();
  const auto times = uniform_grid(s.integrator.steps, s.integrator.horizon);
  const auto k = start.x.size();
  Vec v = start.xdot;
  if (v.norm() == 0.0) v = Vec::Constant(k, 0.2);

  auto build = [&](const std::string& name, auto x_of, auto xdot_of, auto y_of) {
    Probe p{name, {}};
    p.curve.times = times;
    for (double t : times) {
      p.curve.x.push_back(x_of(t));
      p.curve.xdot.push_back(xdot_of(t));
      p.curve.y.push_back(y_of(t));
    }
    return p;
  };
  const double y0 = start.y;
  std::vector<Probe> out;
  out.push_back(build(
      "line, constant y", [&](double t) -> Vec { return start.x + t * v; }, [&](double) -> Vec { return v; },
      [&](double) { return y0; }));
  out.push_back(build(
      "line, y = t", [&](double t) -> Vec { return start.x + t * v; }, [&](double) -> Vec { return v; },
      [&](double t) { return t; }));
  out.push_back(build(
      "wave, constant y", [&](double t) -> Vec { return (start.x.array() + 0.1 * std::sin(2.0 * t)).matrix(); },
      [&](double t) -> Vec { return Vec::Constant(k, 0.2 * std::cos(2.0 * t)); }, [&](double) { return y0; }));
  out.push_back(build(
      "wave, oscillating y",
      [&](double t) -> Vec { return (start.x.array() + 0.1 * std::sin(2.0 * t)).matrix(); },
      [&](double t) -> Vec { return Vec::Constant(k, 0.2 * std::cos(2.0 * t)); },
      [&](double t) { return y0 + 0.5 * std::sin(t); }));
  return out;
}

std::pair<double, double> range(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return {*lo, *hi};
}

}  // namespace

int cmd_validate(Context& ctx) {
  auto& s = ctx.scenario;
  auto& out = *ctx.out;
  if (!s.scaling) {
    out << "scenario '" << s.name << "' has no scaling structure; nothing to validate\n";
    return ok;
  }
  SamplingBox box = *s.box;
  if (ctx.options.seed) box.seed = *ctx.options.seed;
  const double tol = ctx.options.tolerance.value_or(s.tolerances.validation);

  std::vector<ValidationReport> reports;
  if (s.lagrangian) {
    auto r = check_homogeneity(*s.lagrangian, *s.scaling, box, tol);
    r.check = "homogeneity";
    reports.push_back(r);
  }
  for (auto& r : check_scaling_structure(*s.scaling, box, tol)) reports.push_back(r);

  bool all = true;
  out << fmt::format("{:<26}{:>12}{:>12}{:>10}{:>9}  {}\n", "check", "max_abs", "max_rel", "tol", "skipped",
                     "verdict");
  json j;
  j["manifest"] = ctx.manifest();
  j["reports"] = json::array();
  for (const auto& r : reports) {
    all = all && r.pass;
    out << fmt::format("{:<26}{:>12.3e}{:>12.3e}{:>10.1e}{:>9}  {}\n", r.check, r.max_abs, r.max_rel, r.tolerance,
                       r.skipped, verdict(r.pass));
    j["reports"].push_back(report_json(r));
  }
  j["pass"] = all;
  for (const auto& r : reports) {
    if (!r.pass) out << "FAILED: " << r.check << '\n';
  }
  out << j["reports"].dump(2) << '\n';
  const auto file = ctx.path(".json");
  ctx.write_json(file, j);
  ctx.write_manifest({file.filename().string()});
  return all ? ok : failed;
}

int cmd_simulate(Context& ctx) {
  auto& s = ctx.scenario;
  const auto& cfg = s.integrator;
  const auto& mode = ctx.options.mode;
  json residuals;
  std::string csv;

  if (mode == "el") {
    const auto& L = need_lagrangian(s);
    const auto start = need_full_initial(s);
    const auto g = integrate_el(L, start.q, start.qdot, cfg);
    residuals["euler_lagrange"] = max_norm(el_residual(L, g));
    csv = write_trajectory(ctx, ".csv", g, s.coordinates);
  } else {
    ReducedTrajectory r;
    ResidualSeries res;
    std::string family;
    if (mode == "herglotz") {
      if (!s.herglotz) throw UsageError("scenario '" + s.name + "' has no action-dependent Lagrangian");
      const auto st = s.initial_reduced();
      r = integrate_herglotz(*s.herglotz, st.x, st.xdot, st.y, cfg);
      res = herglotz_residual(*s.herglotz, r);
      family = "herglotz";
    } else {
      const ReducedLagrangian ell = [&] {
        try {
          return s.reduced();
        } catch (const LookupError& e) {
          throw UsageError(e.what());
        }
      }();
      const auto st = s.initial_reduced();
      if (mode == "slp") {
        r = integrate_slp(ell, st.x, st.xdot, st.y, cfg, initial_sigma(s));
        res = slp_residual(ell, r);
        family = "scaling_lp";
      } else {
        r = integrate_std_lp(ell, st.x, st.xdot, st.y, cfg);
        r.sigma = initial_sigma(s);
        res = std_lp_residual(ell, r);
        family = "standard_lp";
      }
    }
    residuals[family + "_horizontal"] = res.max_horizontal();
    residuals[family + "_vertical"] = res.max_vertical();
    csv = write_trajectory(ctx, ".csv", r, s.base_coordinates);
  }

  json j;
  j["manifest"] = ctx.manifest();
  j["max_residual"] = residuals;
  const auto file = ctx.path("-residuals.json");
  ctx.write_json(file, j);
  ctx.write_manifest({csv, file.filename().string()});
  *ctx.out << fmt::format("wrote {} and {}\n", (ctx.out_dir / csv).string(), file.string());
  for (const auto& [k, v] : residuals.items()) *ctx.out << fmt::format("  max {:<24} {:.3e}\n", k, v.get<double>());
  return ok;
}

int cmd_reduce_reconstruct(Context& ctx) {
  auto& s = ctx.scenario;
  const auto& L = need_lagrangian(s);
  const auto& sys = need_scaling(s);
  const auto start = need_full_initial(s);
  const auto& cfg = s.integrator;

  const auto g = integrate_el(L, start.q, start.qdot, cfg);
  const auto projected = project_trajectory(sys, g);
  const auto ell = reduce_lagrangian(L, sys);
  const auto r = integrate_slp(ell, projected.x[0], projected.xdot[0], projected.y[0], cfg, projected.sigma);
  const auto rec = reconstruct_trajectory(sys, r);

  double distance = 0.0;
  for (std::size_t i = 0; i < g.samples(); ++i) distance = std::max(distance, (g.q[i] - rec.q[i]).norm());
  const double el_res = max_norm(el_residual(L, rec));
  const auto prop = proportionality_check(L, sys, ell, g);

  const double dist_tol = ctx.options.tolerance.value_or(s.tolerances.reconstruction);
  const bool pass_dist = distance <= dist_tol;
  const bool pass_res = el_res <= s.tolerances.el_residual;
  const bool pass_prop = prop.discrepancy <= s.tolerances.proportionality;

  json j;
  j["manifest"] = ctx.manifest();
  j["sigma"] = projected.sigma;
  j["max_configuration_distance"] = {{"value", distance}, {"tolerance", dist_tol}, {"pass", pass_dist}};
  j["reconstructed_el_residual"] = {{"value", el_res}, {"tolerance", s.tolerances.el_residual}, {"pass", pass_res}};
  j["proportionality"] = to_json(prop);
  j["proportionality"]["tolerance"] = s.tolerances.proportionality;
  j["proportionality"]["pass"] = pass_prop;
  j["pass"] = pass_dist && pass_res && pass_prop;

  const auto reduced_csv = write_trajectory(ctx, "-reduced.csv", r, s.base_coordinates);
  const auto rec_csv = write_trajectory(ctx, "-reconstructed.csv", rec, s.coordinates);
  const auto file = ctx.path(".json");
  ctx.write_json(file, j);
  ctx.write_manifest({reduced_csv, rec_csv, file.filename().string()});

  auto& out = *ctx.out;
  out << fmt::format("sigma = f(q(0))              {:.17g}\n", projected.sigma);
  out << fmt::format("max configuration distance   {:.3e}  (tol {:.1e})  {}\n", distance, dist_tol,
                     verdict(pass_dist));
  out << fmt::format("reconstructed EL residual    {:.3e}  (tol {:.1e})  {}\n", el_res, s.tolerances.el_residual,
                     verdict(pass_res));
  out << fmt::format("proportionality discrepancy  {:.3e}  (tol {:.1e})  {}\n", prop.discrepancy,
                     s.tolerances.proportionality, verdict(pass_prop));
  return j["pass"].get<bool>() ? ok : failed;
}

int cmd_verify_variational(Context& ctx) {
  auto& s = ctx.scenario;
  const auto& cfg = s.integrator;
  const double h = ctx.options.h.value_or(1e-5);
  const double scale = ctx.options.tolerance.value_or(s.tolerances.variation);
  const std::uint64_t first = ctx.options.seed.value_or(1);
  const std::size_t count = ctx.options.seeds;
  auto& out = *ctx.out;

  json j;
  j["manifest"] = ctx.manifest();
  bool any = false;
  bool all = true;

  auto summarize = [&](const char* label, const VariationBattery& b) {
    out << fmt::format("{:<22} action {:>12.6g}  max|delta| {:.3e}  threshold {:.3e}  {}\n", label, b.action,
                       b.max_abs(), b.threshold(), verdict(b.pass()));
  };

  if (s.lagrangian && s.initial.q) {
    try {
      const auto g = integrate_el(*s.lagrangian, *s.initial.q, *s.initial.qdot, cfg);
      const auto b = hamilton_battery(*s.lagrangian, g, count, first, h, scale);
      j["hamilton"] = to_json(b);
      summarize("hamilton (EL solution)", b);
      any = true;
      all = all && b.pass();
    } catch (const IntegrationError& e) {
      j["hamilton"] = {{"skipped", e.what()}};
      out << "hamilton: skipped (" << e.what() << ")\n";
    }
  }

  std::optional<ReducedLagrangian> ell;
  try {
    ell = s.reduced();
  } catch (const LookupError&) {
  }
  if (ell) {
    const auto st = s.initial_reduced();
    try {
      const auto r = integrate_slp(*ell, st.x, st.xdot, st.y, cfg, initial_sigma(s));
      const auto b = reduced_battery(*ell, r, count, first, h, scale);
      j["reduced"] = to_json(b);
      summarize("reduced (SLP solution)", b);
      any = true;
      all = all && b.pass();
    } catch (const IntegrationError& e) {
      j["reduced"] = {{"skipped", e.what()}};
      out << "reduced: skipped (" << e.what() << ")\n";
    }

    // A straight line in the chart with constant y is not a solution in
    // general; report how strongly the battery detects that.
    ReducedTrajectory line;
    line.times = uniform_grid(cfg.steps, cfg.horizon);
    const Vec v = Vec::Constant(st.x.size(), 0.25);
    for (double t : line.times) {
      line.x.push_back(st.x + t * v);
      line.xdot.push_back(v);
      line.y.push_back(0.5);
    }
    try {
      const auto b = reduced_battery(*ell, line, count, first, h, scale);
      const bool detected = b.max_abs() > 1e-3;
      j["non_solution_probe"] = to_json(b);
      j["non_solution_probe"]["detected"] = detected;
      out << fmt::format("{:<22} max|delta| {:.3e}  {}\n", "probe (straight line)", b.max_abs(),
                         detected ? "detected as non-critical" : "not distinguished");
    } catch (const Error& e) {
      j["non_solution_probe"] = {{"skipped", e.what()}};
    }
  }

  j["pass"] = any && all;
  const auto file = ctx.path(".json");
  ctx.write_json(file, j);
  ctx.write_manifest({file.filename().string()});
  if (!any) {
    *ctx.err << "error: no principle could be integrated for scenario '" << s.name << "'\n";
    return failed;
  }
  return all ? ok : failed;
}

int cmd_compare_herglotz(Context& ctx) {
  auto& s = ctx.scenario;
  if (!s.herglotz) throw UsageError("scenario '" + s.name + "' has no action-dependent Lagrangian");
  const ReducedLagrangian ell = [&] {
    try {
      return s.reduced();
    } catch (const LookupError& e) {
      throw UsageError(e.what());
    }
  }();
  const double tol = ctx.options.tolerance.value_or(1e-9);
  auto& out = *ctx.out;

  json j;
  j["manifest"] = ctx.manifest();
  j["tolerance"] = tol;
  j["probes"] = json::array();
  out << fmt::format("{:<22}{:>11}{:>11}{:>11}{:>11}{:>11}{:>11}{:>11}  {:<9}{}\n", "probe", "slp-hor", "slp-ver",
                     "stdlp-hor", "stdlp-ver", "mhe", "she-min", "she-max", "slp", "herglotz");
  for (const auto& p : probe_family(s)) {
    const auto slp = slp_residual(ell, p.curve);
    const auto std_lp = std_lp_residual(ell, p.curve);
    const auto her = herglotz_residual(*s.herglotz, p.curve);
    const auto [she_lo, she_hi] = range(her.vertical);
    const bool slp_ok = slp.max() <= tol;
    const bool her_ok = her.max() <= tol;
    out << fmt::format("{:<22}{:>11.2e}{:>11.2e}{:>11.2e}{:>11.2e}{:>11.2e}{:>11.3g}{:>11.3g}  {:<9}{}\n", p.name,
                       slp.max_horizontal(), slp.max_vertical(), std_lp.max_horizontal(), std_lp.max_vertical(),
                       her.max_horizontal(), she_lo, she_hi, slp_ok ? "solves" : "fails",
                       her_ok ? "solves" : "fails");
    j["probes"].push_back({{"probe", p.name},
                           {"slp", {{"horizontal", slp.max_horizontal()}, {"vertical", slp.max_vertical()}}},
                           {"standard_lp", {{"horizontal", std_lp.max_horizontal()}, {"vertical", std_lp.max_vertical()}}},
                           {"herglotz", {{"mhe", her.max_horizontal()}, {"she", her.max_vertical()}}},
                           {"she_range", {she_lo, she_hi}},
                           {"solves_slp", slp_ok},
                           {"solves_herglotz", her_ok}});
  }
  const auto file = ctx.path(".json");
  ctx.write_json(file, j);
  ctx.write_manifest({file.filename().string()});
  return ok;
}

}  // namespace scalred::cli
