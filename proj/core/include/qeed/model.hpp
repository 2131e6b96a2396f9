#pragma once

#include <string>

#include "qeed/pulse.hpp"
#include "qeed/su2.hpp"

namespace qeed {

// Quasi-static noise V = dx sx + dy sy + dz sz (rad/ns), constant over a gate.
struct NoiseSpec {
  Vec3 delta = Vec3::Zero();

  // V = (Delta/2) sz.
  static NoiseSpec detuning(double detuning);
  // V = (Delta/2) sz + (eps/2)(sx + sy).
  static NoiseSpec transverse_pair(double detuning, double epsilon);
  // V = delta sj.
  static NoiseSpec along(Axis axis, double delta);

  PauliCoefficients coefficients() const { return PauliCoefficients::from_vector(delta); }
  bool is_zero() const { return delta.isZero(0.0); }
};

// H_c(t) = (Omega_x/2) sx + (Omega_y/2) sy for any drive scheme.
Hamiltonian2 drive_hamiltonian(const ControlPulse& pulse);

// Two-level model: noiseless generator H0(t) + Hc(t), constant noise, target gate.
struct QubitModel {
  std::string id;
  double duration = 0.0;
  Hamiltonian2 control;
  Mat2 target = Mat2::Identity();
  NoiseSpec noise;

  Hamiltonian2 hamiltonian() const;
  QubitModel with_noise(const NoiseSpec& n) const;
  Trajectory2 noiseless_trajectory(int steps = 0) const;
  // Fidelity of the noisy evolution against `target`. steps = 0 selects default_steps.
  double fidelity(int steps = 0) const;
};

// Few-level model on a d-dimensional space with a target on a subspace.
struct DeviceModel {
  std::string id;
  std::size_t dim = 2;
  double duration = 0.0;
  HamiltonianN hamiltonian;
  GateTarget target;

  double fidelity(int steps = 0) const;
};

// exp(-i angle sj / 2).
Mat2 rotation_gate(Axis axis, double angle);

}  // namespace qeed
