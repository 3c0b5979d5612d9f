#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <ostream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "context.hpp"

#ifndef SCALRED_VERSION
#define SCALRED_VERSION "unknown"
#endif

namespace scalred::cli {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void add_common(CLI::App* sub, Options& o, bool integrates) {
  sub->add_option("scenario", o.scenario, "Registered scenario name or path to a scenario JSON file")->required();
  sub->add_option("--out", o.out, "Output directory (default: $SCALRED_OUTPUT_DIR, else ./scalred-out)");
  if (integrates) {
    sub->add_option("--steps", o.steps, "Integrator step count")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", o.horizon, "Integration horizon")->check(CLI::PositiveNumber);
  }
}

int list_scenarios(std::ostream& out) {
  for (const auto& name : builtin_names()) {
    const auto s = builtin(name);
    out << fmt::format("{:<24} {}\n", name, s.description);
  }
  return ok;
}

std::filesystem::path resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return env;
  return "scalred-out";
}

}  // namespace

std::string Context::stem() const {
  std::string s = scenario.name + "-" + command;
  if (!options.mode.empty()) s += "-" + options.mode;
  return s;
}

std::filesystem::path Context::path(const std::string& suffix) const { return out_dir / (stem() + suffix); }

nlohmann::json Context::manifest() const {
  nlohmann::json overrides = nlohmann::json::object();
  if (options.steps) overrides["steps"] = *options.steps;
  if (options.horizon) overrides["horizon"] = *options.horizon;
  if (options.h) overrides["h"] = *options.h;
  if (options.tolerance) overrides["tolerance"] = *options.tolerance;
  if (command == "verify-variational") overrides["seeds"] = options.seeds;
  nlohmann::json m;
  m["tool"] = "scalred";
  m["tool_version"] = SCALRED_VERSION;
  m["command"] = command;
  m["scenario"] = scenario.name;
  m["scenario_source"] = source;
  if (!options.mode.empty()) m["mode"] = options.mode;
  m["overrides"] = overrides;
  m["integrator"] = {{"method", "rk4"}, {"steps", scenario.integrator.steps}, {"horizon", scenario.integrator.horizon}};
  if (options.seed) m["seed"] = *options.seed;
  m["output_dir"] = out_dir.string();
  return m;
}

void Context::write_json(const std::filesystem::path& p, const nlohmann::json& j) const {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << j.dump(2) << '\n';
}

void Context::write_manifest(const std::vector<std::string>& files) const {
  auto m = manifest();
  m["files"] = files;
  m["wall_clock"] = utc_now();
  write_json(path(".manifest.json"), m);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reduction, reconstruction and verification for Lagrangians with scaling symmetries", "scalred"};
  app.set_version_flag("--version", SCALRED_VERSION);
  app.require_subcommand(1);

  Options o;
  auto* validate = app.add_subcommand("validate", "Run the homogeneity and scaling-structure validators");
  add_common(validate, o, false);
  validate->add_option("--seed", o.seed, "Sampling seed");
  validate->add_option("--tolerance", o.tolerance, "Relative tolerance of every check");

  auto* simulate = app.add_subcommand("simulate", "Integrate one equation family and write the trajectory");
  add_common(simulate, o, true);
  simulate->add_option("--mode", o.mode, "Equation family")
      ->required()
      ->check(CLI::IsMember({"el", "slp", "std-lp", "herglotz"}));

  auto* rr = app.add_subcommand("reduce-reconstruct", "Integrate, project, integrate reduced, reconstruct, compare");
  add_common(rr, o, true);
  rr->add_option("--tolerance", o.tolerance, "Maximum configuration distance");

  auto* vv = app.add_subcommand("verify-variational", "First-variation batteries at the integrated solutions");
  vv->set_help_flag("--help", "Print this help message and exit");  // frees the short name for --h
  add_common(vv, o, true);
  vv->add_option("--seeds", o.seeds, "Number of seeded variations")->check(CLI::PositiveNumber);
  vv->add_option("--seed", o.seed, "First variation seed");
  vv->add_option("--h", o.h, "Perturbation step")->check(CLI::PositiveNumber);
  vv->add_option("--tolerance", o.tolerance, "Tolerance scale t in |delta| <= t (1 + |action|)");

  auto* ch = app.add_subcommand("compare-herglotz", "Residuals of both principles on shared probe curves");
  add_common(ch, o, true);
  ch->add_option("--tolerance", o.tolerance, "Tolerance of the witness identities");

  app.add_subcommand("list-scenarios", "List the registered scenarios");

  std::vector<const char*> argv{"scalred"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  if (command == "list-scenarios") return list_scenarios(out);

  Context ctx{command, o, {}, {}, {}, &out, &err};
  try {
    const auto names = builtin_names();
    ctx.source = std::find(names.begin(), names.end(), o.scenario) != names.end() ? "builtin" : o.scenario;
    ctx.scenario = resolve(o.scenario);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    err << "error: cannot load scenario: " << e.what() << '\n';
    return usage;
  }
  if (o.steps) ctx.scenario.integrator.steps = *o.steps;
  if (o.horizon) ctx.scenario.integrator.horizon = *o.horizon;

  try {
    ctx.out_dir = resolve_out_dir(o.out);
    std::filesystem::create_directories(ctx.out_dir);
  } catch (const std::exception& e) {
    err << "error: cannot create output directory: " << e.what() << '\n';
    return usage;
  }

  try {
    if (command == "validate") return cmd_validate(ctx);
    if (command == "simulate") return cmd_simulate(ctx);
    if (command == "reduce-reconstruct") return cmd_reduce_reconstruct(ctx);
    if (command == "verify-variational") return cmd_verify_variational(ctx);
    if (command == "compare-herglotz") return cmd_compare_herglotz(ctx);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const IntegrationError& e) {
    err << "error: integration failed at t = " << e.time() << ": " << e.what() << '\n';
    return failed;
  } catch (const LookupError& e) {
    err << "error: " << e.what() << '\n';
    return usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return failed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return failed;
  }
  return usage;
}

}  // namespace scalred::cli
