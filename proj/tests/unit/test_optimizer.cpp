#include <gtest/gtest.h>

#include <cmath>

#include "qeed/library.hpp"
#include "qeed/optimizer.hpp"

using namespace qeed;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST(Config, Validate) {
  OptimizationConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tolerance = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = {};
  c.restarts = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Config, DefaultDetuningGrid) {
  OptimizationConfig c;
  EXPECT_EQ(c.detuning_grid(50.0), std::vector<double>{0.0});
  c.extended = true;
  const auto g = c.detuning_grid(50.0);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_NEAR(g[1], kPi / 50.0, 1e-15);
}

TEST(Cost, RefinedRowsAreNearOptimal) {
  for (const char* name : {"R1_perp_pi_refined", "R1_perp_5pi2_refined", "R1_perp_2pi_refined"}) {
    const PulseLibraryEntry& e = PulseLibrary::bundled().at(name);
    OptimizationConfig c;
    c.axes = e.robust_axes;
    const CostBreakdown b = cost(e.params, e.target(), c);
    EXPECT_LT(b.total, 1e-5) << name;
    EXPECT_NEAR(b.total, b.infidelity + b.xi, 1e-15);
  }
}

TEST(Cost, PrintedRowCostsMoreThanRefined) {
  const auto& lib = PulseLibrary::bundled();
  OptimizationConfig c;
  const CostBreakdown p = cost(lib.at("R1_perp_7pi4").params, lib.at("R1_perp_7pi4").target(), c);
  const CostBreakdown r = cost(lib.at("R1_perp_7pi4_refined").params, lib.at("R1_perp_7pi4").target(), c);
  EXPECT_GT(p.total, r.total);
}

TEST(InitialParams, AreaMatchesAngle) {
  const FourierPulseParams p = initial_params(kPi, 50.0, 3, -1, DriveScheme::AmplitudePhase, 1);
  EXPECT_EQ(p.n, 3);
  EXPECT_TRUE(p.b.empty());
  EXPECT_NEAR(fourier_waveform(p).area(), kPi, 0.1 * kPi);
  const FourierPulseParams q = initial_params(kPi, 50.0, 3, 1, DriveScheme::AmplitudePhase, 1);
  EXPECT_EQ(q.b.size(), 2u);
  EXPECT_EQ(initial_params(kPi, 50.0, 3, -1, DriveScheme::AmplitudePhase, 1), p);
}

TEST(Optimize, ConvergesForXpi) {
  OptimizationConfig c;
  c.seed = 1;
  const FourierPulseParams init = initial_params(kPi, 50.0, 3, -1, DriveScheme::AmplitudePhase, c.seed);
  const OptimizationResult r = optimize(init, rotation(Axis::X, kPi), c);
  EXPECT_TRUE(r.trace.converged);
  EXPECT_LT(r.trace.final_cost.total, c.tolerance);
  EXPECT_LE(r.trace.attempts, c.restarts);
  EXPECT_FALSE(r.trace.entries.empty());
  EXPECT_EQ(r.params, r.trace.params);
}

TEST(Optimize, DeterministicAcrossThreadCounts) {
  OptimizationConfig c;
  c.max_iterations = 15;
  c.restarts = 2;
  c.tolerance = 1e-12;
  const FourierPulseParams init = initial_params(kPi / 2, 40.0, 2, -1, DriveScheme::AmplitudePhase, 3);
  const OptimizationResult a = optimize(init, rotation(Axis::X, kPi / 2), c);
  c.threads = 4;
  const OptimizationResult b = optimize(init, rotation(Axis::X, kPi / 2), c);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.trace.final_cost.total, b.trace.final_cost.total);
}

TEST(Optimize, ReportsNonConvergence) {
  OptimizationConfig c;
  c.max_iterations = 2;
  c.restarts = 1;
  c.tolerance = 1e-14;
  const FourierPulseParams init = initial_params(kPi, 50.0, 1, -1, DriveScheme::AmplitudePhase, 1);
  const OptimizationResult r = optimize(init, rotation(Axis::X, kPi), c);
  EXPECT_FALSE(r.trace.converged);
  EXPECT_EQ(r.trace.attempts, 1);
}

TEST(Optimize, PolishesPrintedRow) {
  const PulseLibraryEntry& e = PulseLibrary::bundled().at("R1_perp_5pi2");
  OptimizationConfig c;
  c.restarts = 1;
  const CostBreakdown before = cost(e.params, e.target(), c);
  EXPECT_GT(before.total, c.tolerance);
  const OptimizationResult r = optimize(e.params, e.target(), c);
  EXPECT_TRUE(r.trace.converged);
  EXPECT_EQ(r.trace.attempts, 1);
  const auto x = r.params.pack(false), y = e.params.pack(false);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_LT(std::abs(x[k] - y[k]), 0.02);
}
