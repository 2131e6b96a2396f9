#pragma once

// Fourier-ansatz pulse synthesis: minimize C = (1 - F) + xi with xi the sum of
// error distances |r^j(T)| / T over the constrained axes. In extended mode the
// cost is summed over a grid of detunings Delta (noise (Delta/2) sz).

#include <cstdint>
#include <set>
#include <vector>

#include "qeed/pulse.hpp"
#include "qeed/su2.hpp"

namespace qeed {

struct OptimizationConfig {
  double tolerance = 1e-5;
  int max_iterations = 400;
  int restarts = 5;          // total attempts, the first from the given init
  double fd_step = 1e-6;     // relative central-difference step
  std::uint64_t seed = 1;
  std::set<Axis> axes = {Axis::Z};
  bool extended = false;
  std::vector<double> detunings;  // extended grid; empty selects {0, pi/T}
  int steps = 0;                  // propagation steps, 0 selects default_steps
  bool optimize_phase = false;    // also vary (b, psi)
  double perturbation = 0.05;     // restart spread of amplitude coefficients, rad/ns at T = 50 ns
  double max_step = 0.1;          // largest trial change of any parameter per iteration
  int threads = 1;                // gradient components evaluated concurrently

  // Throws std::invalid_argument when tolerance <= 0 or restarts < 1.
  void validate() const;
  std::vector<double> detuning_grid(double duration) const;
};

struct CostBreakdown {
  double total = 0.0;
  double infidelity = 0.0;  // summed over the detuning grid in extended mode
  double xi = 0.0;
};

CostBreakdown cost(const FourierPulseParams& params, const Mat2& target, const OptimizationConfig& config);

struct TraceEntry {
  int attempt = 0;
  int iteration = 0;
  double cost = 0.0;
  double infidelity = 0.0;
  double xi = 0.0;
  double step = 0.0;  // accepted line-search step
};

struct OptimizationTrace {
  std::vector<TraceEntry> entries;
  FourierPulseParams params;
  CostBreakdown final_cost;
  int attempts = 0;
  int best_attempt = 0;
  bool converged = false;
};

struct OptimizationResult {
  FourierPulseParams params;
  OptimizationTrace trace;
};

// Quasi-Newton (BFGS) descent with central-difference gradients and an
// Armijo backtracking line search; restarts from seeded perturbations of
// `init` until C < tolerance or the attempts are used up. Returns the best
// parameters seen; non-convergence is reported through trace.converged.
OptimizationResult optimize(const FourierPulseParams& init, const Mat2& target, const OptimizationConfig& config);

// Starting point for synthesis: sine envelope of area |angle| plus small
// seeded harmonics; n_phase >= 0 adds a phase (or quadrature) channel.
FourierPulseParams initial_params(double angle, double duration, int n, int n_phase, DriveScheme scheme,
                                  std::uint64_t seed);

}  // namespace qeed
