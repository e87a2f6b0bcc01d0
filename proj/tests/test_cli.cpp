// End-to-end checks of the command line tool: exit codes, output files,
// and byte-level determinism across repeated and multi-threaded runs.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "threewc/halfspace.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string g_cli;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "threewc_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  EXPECT_TRUE(in.good()) << "missing file: " << p;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir,
                  const std::string& env_prefix = "") {
  const fs::path log = dir / "stdout.log";
  const std::string cmd =
      env_prefix + "\"" + g_cli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult res;
  if (status == -1)
    res.exit_code = -1;
  else if (WIFEXITED(status))
    res.exit_code = WEXITSTATUS(status);
  res.output = slurp(log);
  return res;
}

}  // namespace

TEST(Cli, RegionWritesParsableFiles) {
  const auto dir = fresh_dir("region");
  const auto res = run_cli("region --m 3,2,1 --tau 1/2 --out \"" + dir.string() + "\"", dir);
  ASSERT_EQ(res.exit_code, 0) << res.output;

  const auto listed = threewc::poly::HalfspaceSystem::from_text(slurp(dir / "region_listed.txt"));
  EXPECT_EQ(listed.num_vars(), 6u);
  EXPECT_EQ(listed.num_rows(), 16u);
  const auto raw = threewc::poly::HalfspaceSystem::from_text(slurp(dir / "region_raw.txt"));
  EXPECT_EQ(raw.num_vars(), 21u);

  const json report = json::parse(slurp(dir / "region.json"));
  EXPECT_EQ(report.at("listed_rows").get<int>(), 16);
  EXPECT_EQ(report.at("tau").get<std::string>(), "1/2");
  EXPECT_TRUE(fs::exists(dir / "region_vertices.txt"));
}

TEST(Cli, RegionProjectionVerdict) {
  const auto dir = fresh_dir("region_project");
  const auto res = run_cli(
      "region --m 2,1,1 --tau 1/2 --project --out \"" + dir.string() + "\"", dir);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("[PASS]"), std::string::npos) << res.output;

  const json report = json::parse(slurp(dir / "region.json"));
  EXPECT_TRUE(report.at("projection_matches_listed").get<bool>());
  const auto projected =
      threewc::poly::HalfspaceSystem::from_text(slurp(dir / "region_projected.txt"));
  EXPECT_EQ(projected.num_vars(), 6u);
}

TEST(Cli, SumdofReportsExactMatch) {
  const auto dir = fresh_dir("sumdof");
  const auto res = run_cli("sumdof --m 4,3,2 --tau 3/4 --out \"" + dir.string() + "\"", dir);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const json report = json::parse(slurp(dir / "sumdof.json"));
  EXPECT_EQ(report.at("sum_dof_lp").get<std::string>(), "11/2");
  EXPECT_EQ(report.at("sum_dof_formula").get<std::string>(), "11/2");
  EXPECT_TRUE(report.at("match").get<bool>());
}

TEST(Cli, SimulatePassesAndIsDeterministic) {
  const auto dir_a = fresh_dir("sim_a");
  const auto dir_b = fresh_dir("sim_b");
  const std::string args =
      "simulate --m 3,2,1 --tau 1/2 --snr 40,50,60 --trials 2 --n 2000 --seed 7 --out ";
  const auto res_a =
      run_cli(args + "\"" + dir_a.string() + "\"", dir_a, "THREEWC_THREADS=1 ");
  ASSERT_EQ(res_a.exit_code, 0) << res_a.output;
  const auto res_b =
      run_cli(args + "\"" + dir_b.string() + "\"", dir_b, "THREEWC_THREADS=4 ");
  ASSERT_EQ(res_b.exit_code, 0) << res_b.output;

  const std::string csv = slurp(dir_a / "rates.csv");
  EXPECT_EQ(csv.rfind("trial,snr_db,mode,", 0), 0u);
  EXPECT_EQ(csv, slurp(dir_b / "rates.csv"));
  EXPECT_EQ(slurp(dir_a / "simulate.json"), slurp(dir_b / "simulate.json"));

  const json report = json::parse(slurp(dir_a / "simulate.json"));
  EXPECT_TRUE(report.at("all_ok").get<bool>());
  EXPECT_NEAR(report.at("expected_slope").get<double>(), 3.0, 1e-12);
}

TEST(Cli, AdaptiveMatchesClosedForm) {
  const auto dir = fresh_dir("adaptive");
  const auto res = run_cli(
      "adaptive --m 3,2,1 --tau 1/2 --n 4000 --B 50 --trials 2 --seed 3 --out \"" +
          dir.string() + "\"",
      dir);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const json report = json::parse(slurp(dir / "adaptive.json"));
  EXPECT_EQ(report.at("d31_analytic").get<std::string>(), "1");
  EXPECT_EQ(report.at("outer_bound").get<std::string>(), "1/2");
  EXPECT_TRUE(report.at("violates_outer").get<bool>());
}

TEST(Cli, CompareFlagsTheCounterexample) {
  const auto dir = fresh_dir("compare_321");
  const auto res = run_cli("compare --m 3,2,1 --tau 1/2 --out \"" + dir.string() + "\"", dir);
  ASSERT_EQ(res.exit_code, 0) << res.output;
  const json report = json::parse(slurp(dir / "compare.json"));
  EXPECT_TRUE(report.at("adaptation_enlarges_region").get<bool>());
  EXPECT_EQ(report.at("nonadaptive_max_d31").get<std::string>(), "1/2");
  EXPECT_EQ(report.at("adaptive_d31").get<std::string>(), "1");

  const auto dir2 = fresh_dir("compare_222");
  const auto res2 = run_cli("compare --m 2,2,2 --tau 1/2 --out \"" + dir2.string() + "\"", dir2);
  ASSERT_EQ(res2.exit_code, 0) << res2.output;
  const json report2 = json::parse(slurp(dir2 / "compare.json"));
  EXPECT_FALSE(report2.at("adaptation_enlarges_region").get<bool>());
}

TEST(Cli, RejectsMalformedInputs) {
  const auto dir = fresh_dir("bad_inputs");
  EXPECT_EQ(run_cli("region --m 3,2,1 --tau 0.5 --out \"" + dir.string() + "\"", dir)
                .exit_code,
            2);
  EXPECT_EQ(run_cli("region --m 1,2,3 --tau 1/2 --out \"" + dir.string() + "\"", dir)
                .exit_code,
            2);
  EXPECT_EQ(run_cli("region --m 3,2,1 --tau 3/2 --out \"" + dir.string() + "\"", dir)
                .exit_code,
            2);
  EXPECT_EQ(run_cli("adaptive --m 3,2,1 --tau 1/2 --n 100 --B 5 --trials 1 --out \"" +
                        dir.string() + "\"",
                    dir, "THREEWC_THREADS=banana ")
                .exit_code,
            2);
}

int main(int argc, char** argv) {
  ::testing::InitGoogleTest(&argc, argv);
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
    return 2;
  }
  g_cli = argv[1];
  return RUN_ALL_TESTS();
}
