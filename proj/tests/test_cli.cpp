#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/output.hpp"

using namespace riemobs;
using namespace riemobs::cli;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("riemobs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::string out_dir(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

}  // namespace

TEST(CliExitCodes, VerdictMapping) {
  EXPECT_EQ(exit_code_for(Verdict::Pass), 0);
  EXPECT_EQ(exit_code_for(Verdict::Fail), 1);
  EXPECT_EQ(exit_code_for(Verdict::Inconclusive), 2);
}

TEST_F(CliTest, Ex8ChecksPass) {
  const CliResult r = run({"check", "--benchmark", "oscillator", "--metric", "ex8", "--condition", "a2", "--condition",
                           "a3-nullity", "--out", out_dir("ex8")});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "ex8" / "report.json"));
}

TEST_F(CliTest, SandwichNullityFailsWithTangentWitness) {
  const CliResult r = run({"check", "--benchmark", "oscillator", "--metric", "sandwich", "--condition", "a3-nullity",
                           "--out", out_dir("lp")});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.out.find("tangent-tangent"), std::string::npos) << r.out;
  const nlohmann::json j = nlohmann::json::parse(slurp(dir_ / "lp" / "report.json"));
  EXPECT_EQ(j["verdict"], "fail");
  EXPECT_EQ(j["reports"][0]["witness"]["point"].size(), 3u);
}

TEST_F(CliTest, MalformedJsonNamesTheLine) {
  const std::string cfg = write("bad.json", "{\n  \"benchmark\": \"linear\",\n  \"epsilon\": ,\n}\n");
  const CliResult r = run({"check", "--config", cfg});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownKeyNamesTheField) {
  const std::string cfg = write("bad.json", R"({"benchmark": "linear", "sampling": {"seed": 1, "sedd": 2}})");
  const CliResult r = run({"check", "--config", cfg});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("sampling.sedd"), std::string::npos) << r.err;
}

TEST_F(CliTest, NonSpdMatrixIsRejected) {
  const std::string cfg = write("bad.json", R"({"benchmark": "linear", "geodesic": {"metric": [[1, 2], [2, 1]]}})");
  EXPECT_EQ(run({"geodesic", "--config", cfg}).code, kExitConfig);
}

TEST_F(CliTest, IdenticalSeedsGiveIdenticalFiles) {
  for (const char* sub : {"a", "b"}) {
    const CliResult r = run({"check", "--benchmark", "oscillator", "--metric", "sandwich", "--condition", "a2",
                             "--seed", "42", "--samples", "64", "--out", out_dir(sub)});
    ASSERT_NE(r.code, kExitConfig) << r.err;
  }
  EXPECT_EQ(slurp(dir_ / "a" / "report.json"), slurp(dir_ / "b" / "report.json"));
}

TEST_F(CliTest, GeodesicLengths) {
  const std::string id = write("id.json", R"({"geodesic": {"from": [0, 0], "to": [1, 0], "metric": [[1, 0], [0, 1]]}})");
  CliResult r = run({"geodesic", "--config", id, "--out", out_dir("g1")});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.out.find("1.000000000000"), std::string::npos) << r.out;
  const std::string csv = slurp(dir_ / "g1" / "geodesic.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "s,x_1,x_2,speed");

  const std::string scaled = write("d.json", R"({"geodesic": {"from": [0, 0], "to": [1, 0], "metric": [[4, 0], [0, 1]]}})");
  r = run({"geodesic", "--config", scaled, "--out", out_dir("g2")});
  EXPECT_NE(r.out.find("2.000000000000"), std::string::npos) << r.out;
}

TEST_F(CliTest, SimulateWritesRunAndSummary) {
  const CliResult r = run({"simulate", "--benchmark", "linear", "--gain", "1", "--out", out_dir("sim")});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  const std::string csv = slurp(dir_ / "sim" / "run.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,x_1,x_2,xhat_1,xhat_2,y_1,dist,dist_method,valid");
  const nlohmann::json s = nlohmann::json::parse(slurp(dir_ / "sim" / "summary.json"));
  EXPECT_NEAR(s["fitted_decay_rate"].get<double>(), 2.0 - std::sqrt(2.0), 0.01);
  EXPECT_EQ(s["certificate"]["verdict"], "pass");

  const CliResult rep = run({"report", "--out", out_dir("sim")});
  EXPECT_EQ(rep.code, kExitPass) << rep.err;
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "report.txt"));
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "dist_vs_t.dat"));
}

TEST_F(CliTest, StartOutsideTheRegionIsAConfigError) {
  const std::string cfg = write("out.json", R"({"benchmark": "linear", "simulation": {"x0": [5, 0], "gain": 1}})");
  const CliResult r = run({"simulate", "--config", cfg, "--out", out_dir("o")});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("5"), std::string::npos) << r.err;
}

TEST_F(CliTest, ReportOnEmptyDirectory) {
  fs::create_directories(dir_ / "empty");
  const CliResult r = run({"report", "--out", out_dir("empty")});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("MissingArtifacts"), std::string::npos) << r.err;
}

TEST(CliConfig, Defaults) {
  const JobConfig c = parse_config("{}");
  EXPECT_EQ(c.benchmark, "oscillator");
  EXPECT_EQ(c.epsilon, Defaults::epsilon);
  EXPECT_EQ(c.samples, Defaults::samples);
  EXPECT_EQ(default_metric("oscillator"), "ex8");
  EXPECT_TRUE(known_condition("a3-direct"));
  EXPECT_FALSE(known_condition("a4"));
}

TEST(CliConfig, PolynomialTerms) {
  const Polynomial p = parse_polynomial(R"([{"coeff": 2.0, "exponents": [1, 0]}, {"coeff": -1, "exponents": [0, 2]}])", 2);
  Vec x(2);
  x << 3.0, 2.0;
  EXPECT_DOUBLE_EQ(p.eval<double>(x), 2.0);
  EXPECT_THROW(parse_polynomial(R"([{"coeff": 1, "exponents": [1]}])", 2), Error);
}

TEST(CliOutput, NumberFormatting) {
  EXPECT_EQ(format_full(0.1), "0.10000000000000001");
  EXPECT_EQ(format_full(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_TRUE(json_number(std::numeric_limits<double>::infinity()).is_string());
  EXPECT_EQ(json_number(0.1).dump(), "0.1");
}
