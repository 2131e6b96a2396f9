#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "commands.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using qeed::Axis;

namespace {
constexpr double kPi = 3.141592653589793;

int run(const std::string& args) {
  const std::string cmd = std::string(QEED_CLI_PATH) + " -q " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("qeed_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};
}  // namespace

TEST(ParseGate, NamedForms) {
  EXPECT_EQ(qeed::cli::parse_gate("Xpi"), std::make_pair(Axis::X, kPi));
  auto g = qeed::cli::parse_gate("X3pi2");
  EXPECT_EQ(g.first, Axis::X);
  EXPECT_NEAR(g.second, 1.5 * kPi, 1e-15);
  g = qeed::cli::parse_gate("Ypi4");
  EXPECT_EQ(g.first, Axis::Y);
  EXPECT_NEAR(g.second, 0.25 * kPi, 1e-15);
  g = qeed::cli::parse_gate("x-pi2");
  EXPECT_NEAR(g.second, -0.5 * kPi, 1e-15);
  g = qeed::cli::parse_gate("X:1.25");
  EXPECT_NEAR(g.second, 1.25, 1e-15);
  EXPECT_THROW(qeed::cli::parse_gate("Wpi"), qeed::cli::UsageError);
  EXPECT_THROW(qeed::cli::parse_gate("X:abc"), qeed::cli::UsageError);
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("library list"), 0);
  EXPECT_EQ(run("library show R1_perp_pi"), 0);
  EXPECT_EQ(run("library show missing_pulse"), 1);
  EXPECT_EQ(run("--no-such-flag"), 1);
  EXPECT_EQ(run("evaluate " + path("absent.json")), 1);
  EXPECT_EQ(run("synthesize --gate Zpi -o " + path("z.json")), 1);
}

TEST_F(CliTest, SynthesizeNotConverged) {
  EXPECT_EQ(run("synthesize --gate Xpi --n 1 --restarts 1 --max-iterations 1 --tolerance 1e-14 --threads 1 -o " +
                path("p.json")),
            2);
  EXPECT_TRUE(fs::exists(path("p.json")));
}

TEST_F(CliTest, RescaleIdentityKeepsCoefficients) {
  ASSERT_EQ(run("rescale R1_perp_7pi4 --alpha 1 -o " + path("r.json")), 0);
  const auto j = read_json(path("r.json"));
  EXPECT_EQ(j.at("a").get<std::vector<double>>(), (std::vector<double>{0.223, 0.134, 0.076}));
  EXPECT_DOUBLE_EQ(j.at("T_ns").get<double>(), 50.0);
  ASSERT_EQ(run("rescale R1_perp_7pi4 --gate-time 100 -o " + path("s.json")), 0);
  EXPECT_DOUBLE_EQ(read_json(path("s.json")).at("T_ns").get<double>(), 100.0);
  EXPECT_EQ(run("evaluate " + path("s.json") + " --json " + path("e.json")), 0);
  EXPECT_NEAR(read_json(path("e.json")).at("noiseless_fidelity").get<double>(), 1.0, 1e-4);
}

TEST_F(CliTest, CurveToPulseCircle) {
  ASSERT_EQ(run("curve2pulse --curve circle --gate-time 20 -o " + path("c.json")), 0);
  const auto j = read_json(path("c.json"));
  EXPECT_DOUBLE_EQ(j.at("T_ns").get<double>(), 20.0);
  const auto omega = j.at("omega").get<std::vector<double>>();
  ASSERT_GT(omega.size(), 10u);
  EXPECT_NEAR(omega[omega.size() / 2], 2 * kPi / 20.0, 1e-6);
}

TEST_F(CliTest, SweepSpecFile) {
  {
    std::ofstream out(path("spec.json"));
    out << R"({"model": "single_qubit", "pulse": "R1_perp_pi_refined", "grid": [0, 0.01], "normalization": "omega_max"})";
  }
  ASSERT_EQ(run("sweep " + path("spec.json") + " --workers 2 -o " + path("out.csv")), 0);
  std::ifstream in(path("out.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "param,fidelity,infidelity");
}
