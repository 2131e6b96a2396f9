#include <gtest/gtest.h>

#include <cmath>

#include "qeed/devices.hpp"
#include "qeed/library.hpp"
#include "qeed/sweep.hpp"

using namespace qeed;

namespace {
constexpr double kPi = 3.141592653589793;

SweepSpec detuning_sweep() {
  return SweepSpec::from_json(nlohmann::json::parse(R"({
    "model": "single_qubit", "pulse": "R1_perp_pi_refined",
    "grid": {"start": -0.1, "stop": 0.1, "points": 9}, "normalization": "omega_max"})"));
}
}  // namespace

TEST(Grid, Forms) {
  EXPECT_EQ(parse_grid(nlohmann::json::parse("[1, 2.5]")), (std::vector<double>{1.0, 2.5}));
  const auto g = parse_grid(nlohmann::json::parse(R"({"start": 0, "stop": 1, "points": 5})"));
  EXPECT_EQ(g, (std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}));
  EXPECT_EQ(parse_grid(nlohmann::json::parse(R"({"start": 3, "stop": 9, "points": 1})")), std::vector<double>{3.0});
  EXPECT_THROW(parse_grid(nlohmann::json::parse(R"({"start": 0, "stop": 1, "points": 0})")), std::invalid_argument);
  EXPECT_THROW(parse_grid(nlohmann::json("x")), std::invalid_argument);
}

TEST(Normalization, Names) {
  EXPECT_EQ(parse_normalization("omega_max"), Normalization::OmegaMax);
  EXPECT_EQ(to_string(Normalization::InverseTime), "inverse_time");
  EXPECT_THROW(parse_normalization("per_fortnight"), std::invalid_argument);
}

TEST(Spec, JsonRoundTrip) {
  const SweepSpec s = detuning_sweep();
  const SweepSpec t = SweepSpec::from_json(s.to_json());
  EXPECT_EQ(t.to_json(), s.to_json());
  EXPECT_EQ(t.grid.size(), 9u);
}

TEST(Sweep, MatchesDirectEvaluationInGridOrder) {
  const SweepSpec s = detuning_sweep();
  const SweepResult r = run_sweep(s, 3);
  const PulseLibraryEntry& e = PulseLibrary::bundled().at("R1_perp_pi_refined");
  const double om = e.pulse().max_amplitude();
  ASSERT_EQ(r.rows.size(), s.grid.size());
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    EXPECT_EQ(r.rows[k].param, s.grid[k]);
    const double f = single_qubit_detuned(e.pulse(), s.grid[k] * om, e.target()).fidelity();
    EXPECT_NEAR(r.rows[k].fidelity, f, 1e-13);
    EXPECT_NEAR(r.rows[k].infidelity, 1.0 - r.rows[k].fidelity, 1e-15);
  }
  EXPECT_NEAR(r.metadata.at("scale").get<double>(), om, 1e-15);
}

TEST(Sweep, WorkerCountDoesNotChangeResults) {
  const SweepSpec s = detuning_sweep();
  const SweepResult a = run_sweep(s, 1), b = run_sweep(s, 8);
  EXPECT_EQ(a.csv(), b.csv());
  EXPECT_EQ(a.to_json(), b.to_json());
}

TEST(Sweep, CsvLayout) {
  const SweepResult r = run_sweep(detuning_sweep(), 2);
  const std::string csv = r.csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "param,fidelity,infidelity");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);

  SweepSpec p = SweepSpec::from_json(nlohmann::json::parse(R"({
    "model": "xy_pair", "pulse": "R1_all_3pi2_refined", "grid": [-0.01, 0.01], "grid2": [0, 0.01, 0.02],
    "normalization": "omega_max"})"));
  const SweepResult q = run_sweep(p, 2);
  EXPECT_TRUE(q.two_dimensional);
  ASSERT_EQ(q.rows.size(), 6u);
  EXPECT_EQ(q.rows[1].param, -0.01);
  EXPECT_EQ(q.rows[1].param2, 0.01);
  EXPECT_EQ(q.csv().substr(0, q.csv().find('\n')), "param,param2,fidelity,infidelity");
}

TEST(Sweep, CoupledTransmons) {
  const SweepSpec s = SweepSpec::from_json(nlohmann::json::parse(R"({
    "model": "coupled_transmons", "grid": [0.01, 0.02]})"));
  const SweepResult r = run_sweep(s, 2);
  EXPECT_EQ(r.csv().substr(0, r.csv().find('\n')), "g,dzz_exact,dzz_perturbative");
  CoupledTransmonParams c;
  c.coupling = 0.02;
  EXPECT_NEAR(r.rows[1].perturbative, zz_perturbative(c), 1e-15);
  EXPECT_TRUE(r.to_json().contains("dzz"));
}

TEST(ResolvePulse, References) {
  const ResolvedPulse c = resolve_pulse(nlohmann::json::parse(R"({"cosine": {"angle": 1.5, "max_amplitude": 0.2}})"));
  EXPECT_NEAR(c.pulse.area(), 1.5, 1e-6);
  const ResolvedPulse d = resolve_pulse(nlohmann::json::parse(R"({"cosine_of": "R1_perp_pi", "angle": 3.14159})"));
  EXPECT_NEAR(d.pulse.max_amplitude(), PulseLibrary::bundled().at("R1_perp_pi").pulse().max_amplitude(), 1e-9);
  const ResolvedPulse e = resolve_pulse("R1_perp_2pi", 80.0);
  EXPECT_DOUBLE_EQ(e.pulse.duration(), 80.0);
  EXPECT_NEAR(e.angle, 2 * kPi, 1e-15);
}

TEST(Sweep, Errors) {
  SweepSpec s = detuning_sweep();
  s.model = "quantum_toaster";
  EXPECT_THROW(run_sweep(s, 1), std::invalid_argument);
  s = detuning_sweep();
  s.grid.clear();
  EXPECT_THROW(run_sweep(s, 1), std::invalid_argument);
  s = detuning_sweep();
  s.pulse = 42;
  EXPECT_THROW(run_sweep(s, 1), std::invalid_argument);
  s = detuning_sweep();
  s.model = "xy_pair";
  EXPECT_THROW(run_sweep(s, 1), std::invalid_argument);
}
