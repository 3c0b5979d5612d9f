#pragma once

// CSV and JSON serialization of sampled trajectories.
//
// CSV layout: a prologue of "# key=value" comment lines, one header row,
// then one row per sample with every number printed with 17 significant
// digits. Full trajectories use columns t, q..., qdot...; reduced ones use
// t, x..., xdot..., y and always carry "sigma" in the prologue.

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scalred/trajectory.hpp"

namespace scalred {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Default column names: a single coordinate is "x" (or "q"), otherwise
/// prefix1..prefixN.
std::vector<std::string> default_names(const std::string& prefix, std::size_t dim);

std::string format_number(double v);

void write_csv(std::ostream& os, const Trajectory& g, const std::vector<std::string>& names,
               const Metadata& meta = {});
void write_csv(std::ostream& os, const ReducedTrajectory& r, const std::vector<std::string>& names,
               const Metadata& meta = {});

Trajectory read_trajectory_csv(std::istream& is, Metadata* meta = nullptr);
ReducedTrajectory read_reduced_csv(std::istream& is, Metadata* meta = nullptr);

nlohmann::json to_json(const Trajectory& g);
nlohmann::json to_json(const ReducedTrajectory& r);
Trajectory trajectory_from_json(const nlohmann::json& j);
ReducedTrajectory reduced_trajectory_from_json(const nlohmann::json& j);

}  // namespace scalred
