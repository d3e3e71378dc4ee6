#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::string kCli = BESS_CLI_PATH;
const std::string kFixture = std::string(BESS_FIXTURE_DIR) + "/parallel_resistor.json";

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("bess_cli_test_" + name);
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  json j;
  in >> j;
  return j;
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST(Cli, CheckPassesOnFixture) {
  const fs::path out = temp_file("check.json");
  ASSERT_EQ(run("check " + kFixture + " --tuples 24 --out " + out.string()), 0);
  const json report = read_json(out);
  EXPECT_TRUE(report.at("pass").get<bool>());
  EXPECT_EQ(report.at("command"), "check");
  for (const json& c : report.at("checks")) EXPECT_TRUE(c.at("pass").get<bool>());
}

TEST(Cli, EvalReportsClosedFormValue) {
  const fs::path out = temp_file("eval.json");
  ASSERT_EQ(run("eval " + kFixture + " --out " + out.string()), 0);
  const json report = read_json(out);
  const json& v = report.at("values").at(0);  // point (1, 1)
  EXPECT_NEAR(v.at(0).at(0).at(0).get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(v.at(0).at(0).at(1).get<double>(), 0.0, 1e-12);
}

TEST(Cli, CayleyReportsOriginValue) {
  const fs::path out = temp_file("cayley.json");
  ASSERT_EQ(run("cayley " + kFixture + " --out " + out.string()), 0);
  const json report = read_json(out);
  const json& v = report.at("values").at(0);  // W = 0
  EXPECT_NEAR(v.at(0).at(0).at(0).get<double>(), -1.0 / 3.0, 1e-12);
}

TEST(Cli, DecomposeEmitsPhiSamples) {
  const fs::path out = temp_file("decompose.json");
  ASSERT_EQ(run("decompose " + kFixture + " --out " + out.string()), 0);
  const json report = read_json(out);
  ASSERT_GE(report.at("phi_samples").size(), 1u);
  // First sample is the base point E; phi there is (1/2, -1/2).
  const json& base = report.at("phi_samples").at(0);
  EXPECT_NEAR(base.at("phi").at(0).at(0).at(0).at(0).get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(base.at("phi").at(1).at(0).at(0).at(0).get<double>(), -0.5, 1e-12);
}

TEST(Cli, RealizeReconstructEvalRoundTrip) {
  const fs::path realized = temp_file("realized.json");
  ASSERT_EQ(run("realize " + kFixture + " --out " + realized.string()), 0);
  const json realize_report = read_json(realized);
  ASSERT_TRUE(realize_report.at("pass").get<bool>());

  // Feed the emitted colligation back in.
  json problem = read_json(kFixture);
  problem["colligation"] = realize_report.at("colligation");
  const fs::path problem2 = temp_file("with_colligation.json");
  std::ofstream(problem2) << problem.dump(2);

  const fs::path reconstructed = temp_file("reconstructed.json");
  ASSERT_EQ(run("reconstruct " + problem2.string() + " --out " +
                reconstructed.string()),
            0);
  const json recon_report = read_json(reconstructed);
  ASSERT_TRUE(recon_report.at("pass").get<bool>());

  // Evaluate the reconstructed pencil at the fixture points.
  json problem3 = read_json(kFixture);
  problem3["shape"] = recon_report.at("shape");
  problem3["pencil"] = recon_report.at("pencil");
  const fs::path problem3_path = temp_file("reconstructed_problem.json");
  std::ofstream(problem3_path) << problem3.dump(2);
  const fs::path eval_out = temp_file("eval_round_trip.json");
  ASSERT_EQ(run("eval " + problem3_path.string() + " --out " + eval_out.string()),
            0);
  const json eval_report = read_json(eval_out);
  EXPECT_NEAR(eval_report.at("values").at(0).at(0).at(0).at(0).get<double>(), 0.5,
              1e-6);
  EXPECT_NEAR(eval_report.at("values").at(1).at(0).at(0).at(0).get<double>(), 1.0,
              1e-6);
}

TEST(Cli, RealcheckPassesOnRealFixture) {
  const fs::path out = temp_file("realcheck.json");
  ASSERT_EQ(run("realcheck " + kFixture + " --out " + out.string()), 0);
  EXPECT_TRUE(read_json(out).at("pass").get<bool>());
}

TEST(Cli, RealcheckRejectsNonRealPencil) {
  // u = 2 pencil with a complex hermitian coefficient: f is not ι-real.
  json problem;
  problem["version"] = "bess/1";
  problem["shape"] = json{{"n", {1}}, {"m", {2}}, {"u", 2}, {"h", 0}};
  problem["pencil"] = json::array(
      {json::array({json::array({json::array({1.0, 0.0}), json::array({0.0, 1.0})}),
                    json::array({json::array({0.0, 0.0}), json::array({1.0, 0.0})})})});
  const fs::path path = temp_file("nonreal.json");
  std::ofstream(path) << problem.dump(2);
  const fs::path out = temp_file("nonreal_report.json");
  EXPECT_EQ(run("realcheck " + path.string() + " --out " + out.string()), 1);
  EXPECT_FALSE(read_json(out).at("pass").get<bool>());
}

TEST(Cli, MalformedFileExitsTwo) {
  const fs::path path = temp_file("malformed.json");
  std::ofstream(path) << "{ not json";
  EXPECT_EQ(run("check " + path.string() + " --out -"), 2);

  const fs::path bad_version = temp_file("bad_version.json");
  std::ofstream(bad_version) << R"({"version": "bess/9"})";
  EXPECT_EQ(run("check " + bad_version.string() + " --out -"), 2);

  // Structurally valid file missing the data the command needs.
  json no_points = read_json(kFixture);
  no_points.erase("points");
  const fs::path no_points_path = temp_file("no_points.json");
  std::ofstream(no_points_path) << no_points.dump(2);
  EXPECT_EQ(run("eval " + no_points_path.string() + " --out -"), 2);

  EXPECT_EQ(run("check /nonexistent/file.json --out -"), 2);
}

TEST(Cli, ReportsAreByteStable) {
  const fs::path a = temp_file("stable_a.json");
  const fs::path b = temp_file("stable_b.json");
  ASSERT_EQ(run("check " + kFixture + " --tuples 12 --out " + a.string()), 0);
  ASSERT_EQ(run("check " + kFixture + " --tuples 12 --out " + b.string()), 0);
  EXPECT_EQ(read_bytes(a), read_bytes(b));
}

TEST(Cli, DemoRunsClean) { EXPECT_EQ(run("demo --out -"), 0); }
