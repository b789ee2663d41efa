#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "rarp/instance.hpp"
#include "rarp/json_text.hpp"
#include "rarp/solver.hpp"

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(RARP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rarp_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string instance_file(const fs::path& dir, int k) {
  char name[32];
  std::snprintf(name, sizeof name, "instance_%04d.json", k);
  return (dir / name).string();
}

TEST(CliGen, BatchIsDeterministic) {
  const fs::path a = fresh_dir("gen_a"), b = fresh_dir("gen_b");
  ASSERT_EQ(run("gen --batch 3 --seed 1 --out " + a.string()), 0);
  ASSERT_EQ(run("gen --batch 3 --seed 1 --jobs 2 --out " + b.string()), 0);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(rarp::read_file(instance_file(a, k)), rarp::read_file(instance_file(b, k)));
  EXPECT_FALSE(fs::exists(instance_file(a, 3)));
}

TEST(CliGen, ItemCountsStayInDefaultRange) {
  const fs::path dir = fresh_dir("gen_range");
  ASSERT_EQ(run("gen --batch 40 --seed 9 --out " + dir.string()), 0);
  for (int k = 0; k < 40; ++k) {
    const rarp::Instance inst = rarp::read_instance(instance_file(dir, k));
    EXPECT_GE(inst.size(), 5u);
    EXPECT_LE(inst.size(), 14u);
  }
}

TEST(CliGen, SeparationWiderThanCanvasIsRejected) {
  const fs::path dir = fresh_dir("gen_bad");
  EXPECT_EQ(run("gen --width 100 --height 80 --sep-abs 120 --out " + dir.string()), 2);
  EXPECT_EQ(run("gen --bogus-flag 1 --out " + dir.string()), 2);
}

TEST(CliGen, ConfigFileWithFlagOverride) {
  const fs::path dir = fresh_dir("gen_cfg");
  const std::string cfg = (dir / "cfg.json").string();
  rarp::write_file_atomic(cfg, R"({"seed": 4, "n_min": 3, "n_max": 3, "gen": {"batch": 2}})");
  ASSERT_EQ(run("gen --config " + cfg + " --n-max 4 --n-min 4 --out " + dir.string()), 0);
  EXPECT_EQ(rarp::read_instance(instance_file(dir, 0)).size(), 4u);
  EXPECT_TRUE(fs::exists(instance_file(dir, 1)));
  EXPECT_FALSE(fs::exists(instance_file(dir, 2)));
}

TEST(CliPipeline, VerifyAcceptsSolverOutputAndRejectsCorruption) {
  const fs::path dir = fresh_dir("pipeline");
  const std::string d = dir.string();
  ASSERT_EQ(run("gen --batch 4 --seed 2 --out " + d), 0);
  const std::string inputs = d + "/instance_????.json";
  ASSERT_EQ(run("solve " + inputs + " --out " + d), 0);
  ASSERT_EQ(run("verify " + inputs + " --out " + d), 0);
  ASSERT_EQ(run("render " + inputs + " --out " + d), 0);
  EXPECT_TRUE(fs::exists(dir / "instance_0000.report.json"));
  EXPECT_TRUE(fs::exists(dir / "instance_0003.ppm"));

  // Inflate every scale tenfold and rebuild the packed rects from it.
  const rarp::Instance inst = rarp::read_instance(instance_file(dir, 1));
  rarp::SolutionFile sol = rarp::read_solution((dir / "instance_0001.solution.json").string());
  for (double& s : sol.solution.scales) s *= 10;
  rarp::write_solution(rarp::make_solution_file(inst, sol.solution), (dir / "instance_0001.solution.json").string());
  EXPECT_EQ(run("verify " + instance_file(dir, 1) + " --out " + d), 1);
  EXPECT_EQ(run("verify " + instance_file(dir, 0) + " --out " + d), 0);
}

TEST(CliPipeline, MissingOrBrokenInputsExitTwo) {
  const fs::path dir = fresh_dir("broken");
  const std::string bad = (dir / "instance_0000.json").string();
  rarp::write_file_atomic(bad, "{\"canvas\": ");
  EXPECT_EQ(run("solve " + bad + " --out " + dir.string()), 2);
  EXPECT_EQ(run("verify " + (dir / "nothing.json").string() + " --out " + dir.string()), 2);
}

TEST(CliOracle, WritesComparisonTable) {
  const fs::path dir = fresh_dir("oracle");
  ASSERT_EQ(run("gen --batch 2 --n-min 2 --n-max 3 --seed 5 --out " + dir.string()), 0);
  ASSERT_EQ(run("oracle " + dir.string() + "/instance_????.json --resolution 0.01 --out " + dir.string()), 0);
  const std::string csv = rarp::read_file((dir / "oracle.csv").string());
  EXPECT_EQ(csv.rfind("instance,n,heuristic,oracle", 0), 0u);
  EXPECT_NE(csv.find("instance_0001,"), std::string::npos);

  ASSERT_EQ(run("gen --batch 1 --n-min 5 --n-max 5 --seed 5 --out " + dir.string()), 0);
  EXPECT_EQ(run("oracle " + instance_file(dir, 0) + " --out " + dir.string()), 2);
}

TEST(CliBench, SmallSweep) {
  const fs::path dir = fresh_dir("bench");
  ASSERT_EQ(run("bench --sizes 50 100 200 --repeats 1 --max-slope 100 --out " + dir.string()), 0);
  EXPECT_NE(rarp::read_file((dir / "bench.json").string()).find("\"slope\""), std::string::npos);
}

}  // namespace
