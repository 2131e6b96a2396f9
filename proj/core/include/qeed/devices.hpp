#pragma once

// Device Hamiltonians in the rotating frame of the drive (RWA). Units: ns and rad/ns.

#include <optional>
#include <string>
#include <vector>

#include "qeed/model.hpp"
#include "qeed/pulse.hpp"

namespace qeed {

// H = (Omega/2)(cos Phi sx + sin Phi sy) + (Delta/2) sz.
QubitModel single_qubit_detuned(const ControlPulse& pulse, double detuning, const Mat2& target);
// H = Hc(t) + V.
QubitModel xy_driven_qubit(const ControlPulse& pulse, const NoiseSpec& noise, const Mat2& target);

struct QuantumDotParams {
  double zeeman_difference = 2.0 * 3.141592653589793 * 0.25;  // Delta = B_z2 - B_z1
  double exchange = 0.0;                                      // J
};

// Two spins, basis index 2 q1 + q2, spin 2 driven resonantly:
//   H = (J/4) sz sz + (J/2)(e^{-i Delta t} s+ s- + h.c.) + (Omega/2)(cos Phi sx2 + sin Phi sy2).
// Target I (x) X_theta on the full four-dimensional space.
DeviceModel double_dot(const QuantumDotParams& params, const ControlPulse& drive, double theta);

// Anti-parallel subspace {|ud>, |du>}: H = -J/2 I + (J/2) sx + (Delta/2) sz with
// J(t) the pulse amplitude. Target X_{pi/2} (sqrt SWAP).
QubitModel swap_subspace(const ControlPulse& exchange, double zeeman_difference);

struct TransmonParams {
  double anharmonicity = -2.0 * 3.141592653589793 * 0.23;  // u < 0
  double detuning = 0.0;                                    // delta = omega - omega_d
  int levels = 3;
};

// H = delta n + (u/2) n (n - 1) + (xi* a + xi a^dag)/2 with
// xi = (Omega_x + i Omega_y) + i alpha_drag d/dt (Omega_x + i Omega_y).
// Target exp(-i theta sx / 2) on {|0>, |1>}.
DeviceModel transmon_single(const TransmonParams& params, const ControlPulse& pulse, double theta,
                            double drag_coefficient);

inline double default_drag_coefficient(double anharmonicity) { return -1.0 / anharmonicity; }

// Golden-section search of the DRAG coefficient minimizing the infidelity at
// zero detuning over [a0 - 2/|u|, a0 + 2/|u|], a0 = -1/u.
struct DragTuning {
  double coefficient = 0.0;
  double infidelity = 0.0;
};
DragTuning tune_drag(TransmonParams params, const ControlPulse& pulse, double theta, int steps = 0);

struct CoupledTransmonParams {
  double omega1 = 2.0 * 3.141592653589793 * 5.0;
  double omega2 = 2.0 * 3.141592653589793 * 5.5;
  double u1 = -2.0 * 3.141592653589793 * 0.23;
  double u2 = -2.0 * 3.141592653589793 * 0.26;
  double coupling = 2.0 * 3.141592653589793 * 0.01;  // g
  int levels = 3;
};

// 9x9 (levels^2) Hamiltonian sum_i [w_i n_i + (u_i/2) n_i(n_i - 1)] + g (a1^dag a2 + a1 a2^dag).
MatN coupled_transmon_hamiltonian(const CoupledTransmonParams& params);

// -2 g^2 (u1 + u2) / ((u1 + D)(u2 - D)), D = w2 - w1.
double zz_perturbative(const CoupledTransmonParams& params);

// Thrown when adiabatic labeling cannot follow an eigenstate.
class LabelingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// (E11 - E10) - (E01 - E00) with dressed states followed from g = 0.
double zz_exact(const CoupledTransmonParams& params, int ramp_steps = 64);

struct ZZValues {
  double perturbative = 0.0;
  double exact = 0.0;
};
ZZValues coupled_transmons(const CoupledTransmonParams& params);

// Target transmon gate with a spectator shifting it by +-delta_zz/2: the
// fidelity averaged over the two branches.
double spectator_qubit_fidelity(const TransmonParams& params, const ControlPulse& pulse, double theta,
                                double drag_coefficient, double zz, int steps = 0);

// Coupler-mediated exchange in span{|01>, |10>}: H = g(t) sx + (delta/2) sz with
// g = Omega/2. Target exp(-i theta sx / 2) (theta = pi: iSWAP up to the
// coupling sign convention; theta = pi/2: sqrt iSWAP).
QubitModel iswap_coupler(const ControlPulse& coupling, double detuning, double theta);

}  // namespace qeed
