#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "scalred/scenarios.hpp"
#include "scalred/trajectory_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) { return std::string(SCALRED_FIXTURE_DIR) + "/" + name; }

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("scalred-cli-") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome invoke(std::vector<std::string> args, bool with_out = true) {
    if (with_out) {
      args.push_back("--out");
      args.push_back(dir_.string());
    }
    std::ostringstream out, err;
    const int code = scalred::cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  std::string read(const std::string& file) const {
    std::ifstream f(dir_ / file);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }

  json read_json(const std::string& file) const { return json::parse(read(file)); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ValidateBuiltinPasses) {
  const auto r = invoke({"validate", "jacobi-arctan"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const auto j = read_json("jacobi-arctan-validate.json");
  EXPECT_TRUE(j.at("pass").get<bool>());
  EXPECT_TRUE(fs::exists(dir_ / "jacobi-arctan-validate.manifest.json"));
}

TEST_F(Cli, ValidateBrokenFixtureNamesTheCheck) {
  const auto r = invoke({"validate", fixture("degree2_lagrangian.json")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("FAILED: homogeneity"), std::string::npos) << r.out;
  const auto cubic = invoke({"validate", fixture("cubic_f.json")});
  EXPECT_EQ(cubic.code, 1);
  EXPECT_NE(cubic.out.find("FAILED: scaling-function"), std::string::npos) << cubic.out;
}

TEST_F(Cli, ValidateUnknownScenarioIsUsageError) {
  const auto r = invoke({"validate", "nosuch"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("jacobi-arctan"), std::string::npos);
  EXPECT_EQ(invoke({"validate", fixture("missing_pi.json")}).code, 2);
}

TEST_F(Cli, SimulateFullCsvColumns) {
  const auto r = invoke({"simulate", "jacobi-arctan", "--mode", "el", "--steps", "2000", "--horizon", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = read("jacobi-arctan-simulate-el.csv");
  EXPECT_NE(csv.find("\nt,a,b,adot,bdot\n"), std::string::npos);
  std::istringstream is(csv);
  const auto g = scalred::read_trajectory_csv(is);
  EXPECT_EQ(g.samples(), 2001u);
  EXPECT_DOUBLE_EQ(g.times.back(), 2.0);
  const auto res = read_json("jacobi-arctan-simulate-el-residuals.json");
  EXPECT_LT(res.at("max_residual").at("euler_lagrange").get<double>(), 1e-4);
}

TEST_F(Cli, SimulateSingularLagrangianFails) {
  const auto r = invoke({"simulate", "linear-counterexample", "--mode", "el"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("singular"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("t = 0"), std::string::npos) << r.err;
}

TEST_F(Cli, SimulateReducedCsvCarriesSigma) {
  const auto r = invoke({"simulate", "jacobi-arctan", "--mode", "slp"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream f(dir_ / "jacobi-arctan-simulate-slp.csv");
  scalred::Metadata meta;
  const auto red = scalred::read_reduced_csv(f, &meta);
  EXPECT_DOUBLE_EQ(red.sigma, 1.0);
  const auto csv = read("jacobi-arctan-simulate-slp.csv");
  EXPECT_NE(csv.find("\nt,x,xdot,y\n"), std::string::npos);
}

TEST_F(Cli, SimulateModeMismatchIsUsageError) {
  EXPECT_EQ(invoke({"simulate", "jacobi-arctan", "--mode", "herglotz"}).code, 2);
  EXPECT_EQ(invoke({"simulate", "jacobi-arctan", "--mode", "bogus"}).code, 2);
}

TEST_F(Cli, ReduceReconstructBuiltins) {
  const auto r = invoke({"reduce-reconstruct", "jacobi-arctan"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const auto j = read_json("jacobi-arctan-reduce-reconstruct.json");
  EXPECT_LE(j.at("max_configuration_distance").at("value").get<double>(), 1e-5);
  EXPECT_TRUE(fs::exists(dir_ / "jacobi-arctan-reduce-reconstruct-reconstructed.csv"));
  EXPECT_EQ(invoke({"reduce-reconstruct", "harmonic-oscillator"}).code, 0);
}

TEST_F(Cli, ReduceReconstructLevelSetMotion) {
  // Circular orbit of the oscillator: f stays 1, so y = 0 and the
  // reconstruction is the horizontal lift.
  auto doc = scalred::to_json(scalred::builtin("harmonic-oscillator"));
  doc["name"] = "circle";
  doc["initial"] = {{"q", {1, 0}}, {"qdot", {0, 1}}};
  const auto path = dir_ / "circle.json";
  std::ofstream(path) << doc.dump();
  ASSERT_EQ(invoke({"reduce-reconstruct", path.string()}).code, 0);
  std::ifstream f(dir_ / "circle-reduce-reconstruct-reduced.csv");
  const auto red = scalred::read_reduced_csv(f);
  for (double y : red.y) EXPECT_NEAR(y, 0.0, 1e-12);
  std::ifstream g(dir_ / "circle-reduce-reconstruct-reconstructed.csv");
  const auto rec = scalred::read_trajectory_csv(g);
  for (std::size_t i = 0; i < rec.samples(); ++i) {
    EXPECT_NEAR(rec.q[i][0], std::cos(rec.times[i]), 1e-10);
    EXPECT_NEAR(rec.q[i][1], std::sin(rec.times[i]), 1e-10);
  }
}

TEST_F(Cli, ReduceReconstructToleranceOverride) {
  EXPECT_EQ(invoke({"reduce-reconstruct", "jacobi-arctan", "--tolerance", "1e-20"}).code, 1);
}

TEST_F(Cli, VerifyVariational) {
  const auto r = invoke({"verify-variational", "jacobi-arctan", "--seeds", "10"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const auto j = read_json("jacobi-arctan-verify-variational.json");
  EXPECT_TRUE(j.at("hamilton").at("pass").get<bool>());
  EXPECT_TRUE(j.at("reduced").at("pass").get<bool>());
  EXPECT_EQ(j.at("hamilton").at("per_seed").size(), 10u);
  EXPECT_TRUE(j.at("non_solution_probe").at("detected").get<bool>());
  EXPECT_EQ(j.at("manifest").at("overrides").at("seeds"), 10);
}

TEST_F(Cli, VerifyVariationalCoarseGridFails) {
  EXPECT_EQ(invoke({"verify-variational", "jacobi-arctan", "--steps", "20", "--seeds", "5"}).code, 1);
}

TEST_F(Cli, CompareHerglotzLinearCounterexample) {
  const auto r = invoke({"compare-herglotz", "linear-counterexample"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = read_json("linear-counterexample-compare-herglotz.json");
  ASSERT_FALSE(j.at("probes").empty());
  bool saw_ramp = false;
  for (const auto& p : j.at("probes")) {
    EXPECT_TRUE(p.at("solves_slp").get<bool>()) << p.at("probe");
    if (p.at("probe") == "line, y = t") {
      saw_ramp = true;
      EXPECT_NEAR(p.at("she_range")[0].get<double>(), -1.0, 1e-12);
      EXPECT_NEAR(p.at("she_range")[1].get<double>(), -1.0, 1e-12);
      EXPECT_FALSE(p.at("solves_herglotz").get<bool>());
    }
  }
  EXPECT_TRUE(saw_ramp);
}

TEST_F(Cli, CompareHerglotzZero) {
  ASSERT_EQ(invoke({"compare-herglotz", "herglotz-zero"}).code, 0);
  const auto j = read_json("herglotz-zero-compare-herglotz.json");
  for (const auto& p : j.at("probes")) {
    const std::string name = p.at("probe");
    const bool constant_y = name.find("constant y") != std::string::npos;
    EXPECT_EQ(p.at("solves_herglotz").get<bool>(), constant_y) << name;
  }
}

TEST_F(Cli, CompareHerglotzYIndependentMatchesStandardFamily) {
  ASSERT_EQ(invoke({"compare-herglotz", fixture("herglotz_y_independent.json")}).code, 0);
  const auto j = read_json("herglotz-y-independent-compare-herglotz.json");
  for (const auto& p : j.at("probes")) {
    const double mhe = p.at("herglotz").at("mhe");
    const double hor = p.at("standard_lp").at("horizontal");
    EXPECT_NEAR(mhe, hor, 1e-12 * (1 + hor)) << p.at("probe");
  }
}

TEST_F(Cli, CompareHerglotzNeedsHerglotz) {
  EXPECT_EQ(invoke({"compare-herglotz", "jacobi-arctan"}).code, 2);
}

TEST_F(Cli, SameManifestGivesIdenticalOutputs) {
  ASSERT_EQ(invoke({"simulate", "harmonic-oscillator", "--mode", "el"}).code, 0);
  const auto csv1 = read("harmonic-oscillator-simulate-el.csv");
  const auto json1 = read("harmonic-oscillator-simulate-el-residuals.json");
  ASSERT_EQ(invoke({"simulate", "harmonic-oscillator", "--mode", "el"}).code, 0);
  EXPECT_EQ(read("harmonic-oscillator-simulate-el.csv"), csv1);
  EXPECT_EQ(read("harmonic-oscillator-simulate-el-residuals.json"), json1);
  const auto m = read_json("harmonic-oscillator-simulate-el.manifest.json");
  EXPECT_TRUE(m.contains("wall_clock"));
  EXPECT_EQ(m.at("files").size(), 2u);
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  ::setenv(scalred::cli::kOutputDirEnv, dir_.c_str(), 1);
  const auto r = invoke({"validate", "harmonic-oscillator"}, false);
  ::unsetenv(scalred::cli::kOutputDirEnv);
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "harmonic-oscillator-validate.json"));
}

TEST_F(Cli, UsageAndListing) {
  EXPECT_EQ(invoke({}, false).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}, false).code, 2);
  EXPECT_EQ(invoke({"validate"}, false).code, 2);
  EXPECT_EQ(invoke({"--help"}, false).code, 0);
  const auto list = invoke({"list-scenarios"}, false);
  EXPECT_EQ(list.code, 0);
  for (const auto& name : scalred::builtin_names()) EXPECT_NE(list.out.find(name), std::string::npos);
}
