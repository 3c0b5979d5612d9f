#pragma once

// Shared state of one command invocation.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "scalred/scenarios.hpp"

namespace scalred::cli {

/// Scenario lacks what the command needs; maps to the usage exit code.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string scenario;
  std::string mode;
  std::optional<std::size_t> steps;
  std::optional<double> horizon;
  std::optional<std::uint64_t> seed;
  std::optional<double> h;
  std::optional<double> tolerance;
  std::size_t seeds = 50;
  std::string out;
};

struct Context {
  std::string command;
  Options options;
  Scenario scenario;
  std::string source;  // "builtin" or the file path
  std::filesystem::path out_dir;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;

  /// Output file stem: "<scenario>-<command>[-<mode>]".
  std::string stem() const;

  /// Run description without the wall clock, embedded in every report.
  nlohmann::json manifest() const;

  /// Writes `<stem>.manifest.json` (manifest plus wall clock).
  void write_manifest(const std::vector<std::string>& files) const;

  std::filesystem::path path(const std::string& suffix) const;
  void write_json(const std::filesystem::path& p, const nlohmann::json& j) const;
};

int cmd_validate(Context& ctx);
int cmd_simulate(Context& ctx);
int cmd_reduce_reconstruct(Context& ctx);
int cmd_verify_variational(Context& ctx);
int cmd_compare_herglotz(Context& ctx);

}  // namespace scalred::cli
