#pragma once

#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeed/geometry.hpp"
#include "qeed/model.hpp"

namespace qeed {

// |r(tau)|, in ns.
double error_distance(const ErrorCurve& curve);
// \int r' x r dt by the trapezoidal rule, in ns^2.
Vec3 net_area(const ErrorCurve& curve);

// Magnus terms of the interaction-picture noise U_I = T exp(-i delta \int T.s dt):
// log U_I = sum_n delta^n (-i A_n.s). A_1 = r(tau) and A_2 = net area; higher
// orders from the recursive Magnus generator on cumulative trapezoidal
// integrals.
struct MagnusCoefficients {
  Axis axis = Axis::Z;
  std::vector<Vec3> vectors;    // A_1 .. A_order (Pauli vectors, ns^n)
  std::vector<double> norms;    // operator norms |A_n|
  std::vector<double> rescaled; // 10^-n |A_n|
};

inline constexpr int kMaxMagnusOrder = 4;

// Throws std::invalid_argument for order outside [1, 4].
MagnusCoefficients magnus_coefficients(const ErrorCurve& curve, int order);

enum class Correctability { NonCorrectable, PossiblyCorrectable };
std::string to_string(Correctability c);

struct CorrectabilityResult {
  Correctability verdict = Correctability::PossiblyCorrectable;
  double max_commutator = 0.0;               // sup_t |[V, Hc(t)]|
  bool two_noncommuting_directions = false;  // Hc(t) spans non-commuting directions
};

inline constexpr double kCommutatorTolerance = 1e-12;

CorrectabilityResult correctability_check(const Hamiltonian2& control, const PauliCoefficients& noise, double duration,
                                          int samples = 2001);

struct AxisRobustness {
  Axis axis = Axis::Z;
  double error_distance = 0.0;
  Vec3 net_area = Vec3::Zero();
  std::vector<double> magnus;  // rescaled, empty when not requested
};

struct ReferenceFidelity {
  Axis axis = Axis::Z;
  double relative_strength = 0.0;  // delta_j = relative_strength * Omega_m / 2
  double fidelity = 0.0;
};

struct RobustnessReport {
  std::string model;
  double duration = 0.0;
  double max_amplitude = 0.0;
  double noiseless_fidelity = 0.0;
  std::vector<AxisRobustness> axes;
  std::vector<ReferenceFidelity> reference;

  const AxisRobustness& at(Axis axis) const;
  nlohmann::json to_json() const;
  // Fixed-column text table.
  std::string table() const;
};

struct ReportOptions {
  std::set<Axis> axes = {Axis::Z};
  int magnus_order = 0;  // 0: skip Magnus terms
  std::vector<double> reference_strengths = {0.01, 0.05};
  int steps = 0;
};

// Noiseless geometry of `model` plus fidelities at the reference noise points.
// `max_amplitude` sets the noise scale of the reference points.
RobustnessReport evaluate_robustness(const QubitModel& model, double max_amplitude, const ReportOptions& options = {});

}  // namespace qeed
