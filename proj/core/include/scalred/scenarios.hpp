#pragma once

// Ready-made systems and a JSON loader for user-defined ones.
//
// Document layout (schema_version 1):
//
//   {
//     "schema_version": 1,
//     "name": "...", "description": "...",
//     "dims": {"ambient": n, "base": k},
//     "coordinates": ["a", "b"],            // optional, default q1..qn
//     "base_coordinates": ["x"],            // optional, default x1..xk
//     "parameters": {"e": 2},               // optional named constants
//     "lagrangian": "expr over q, qdot",
//     "scaling": {
//       "psi": ["expr over s, q"], "f": "expr over q",
//       "pi": ["expr over q"], "triv_inv": ["expr over x, sigma"],
//       "generator": ["expr over q"], "domain": ["expr over q"]
//     },
//     "herglotz": "expr over x, xdot, y",
//     "reduced_lagrangian": "expr over x, xdot, y",
//     "abelian": {"group": "additive", "psi": ["expr over g, q"],
//                 "pi": ["expr over q"], "connection": ["expr over q"]},
//     "initial": {"q": [...], "qdot": [...]} or {"x": [...], "xdot": [...], "y": v},
//     "integrator": {"steps": N, "horizon": T},
//     "sampling_box": {"lower": [...], "upper": [...], "count": m, "seed": s},
//     "tolerances": {...}
//   }
//
// Velocity variables are the coordinate names with a "dot" suffix.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalred/dynamics.hpp"
#include "scalred/reduction.hpp"
#include "scalred/sampling.hpp"
#include "scalred/systems.hpp"

namespace scalred {

struct ScenarioTolerances {
  double validation = 1e-9;
  double reconstruction = 1e-5;
  double el_residual = 1e-4;
  double proportionality = 1e-7;
  double variation = 1e-6;
};

struct InitialState {
  std::optional<Vec> q;
  std::optional<Vec> qdot;
  std::optional<Vec> x;
  std::optional<Vec> xdot;
  std::optional<double> y;

  bool has_full() const { return q.has_value(); }
};

struct Scenario {
  std::string name;
  std::string description;
  std::vector<std::string> coordinates;
  std::vector<std::string> base_coordinates;
  std::map<std::string, double> parameters;

  std::optional<LagrangianSystem> lagrangian;
  std::optional<ScalingSystem> scaling;
  std::optional<HerglotzLagrangian> herglotz;
  std::optional<ReducedLagrangian> direct_reduced;
  std::optional<AbelianSymmetry> abelian;

  InitialState initial;
  IntegratorConfig integrator;
  std::optional<SamplingBox> box;
  ScenarioTolerances tolerances;

  std::size_t ambient_dim() const { return coordinates.size(); }
  std::size_t base_dim() const { return base_coordinates.size(); }

  /// The direct reduced Lagrangian when given, otherwise the one derived
  /// from L and the scaling structure. Throws LookupError if neither exists.
  ReducedLagrangian reduced() const;

  /// Initial quotient data: given directly or projected from (q, qdot).
  ReducedPoint initial_reduced() const;

  /// Normalized document; load_json(to_json()) reproduces the scenario.
  const nlohmann::json& document() const { return document_; }

 private:
  nlohmann::json document_;
  friend Scenario load_json(const nlohmann::json& doc);
};

/// Throws LookupError listing the registered names.
Scenario builtin(const std::string& name);
std::vector<std::string> builtin_names();

/// Parses a scenario document. SchemaError messages start with the JSON
/// pointer of the offending field.
Scenario load_json(const nlohmann::json& doc);
/// Reads and parses a file; LookupError if it cannot be opened.
Scenario load(const std::string& path);
/// A registered name or, failing that, a file path.
Scenario resolve(const std::string& name_or_path);

nlohmann::json to_json(const Scenario& s);

}  // namespace scalred
