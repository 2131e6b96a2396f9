#include "qeed/model.hpp"

#include <cmath>

namespace qeed {

NoiseSpec NoiseSpec::detuning(double detuning) { return {Vec3(0.0, 0.0, detuning / 2.0)}; }

NoiseSpec NoiseSpec::transverse_pair(double detuning, double epsilon) {
  return {Vec3(epsilon / 2.0, epsilon / 2.0, detuning / 2.0)};
}

NoiseSpec NoiseSpec::along(Axis axis, double delta) {
  NoiseSpec n;
  n.delta[axis_index(axis)] = delta;
  return n;
}

Hamiltonian2 drive_hamiltonian(const ControlPulse& pulse) {
  if (pulse.scheme() == DriveScheme::AmplitudePhase) {
    return [pulse](double t) {
      const double omega = pulse.amplitude(t);
      const double phi = pulse.phase(t);
      return PauliCoefficients{0.0, 0.5 * omega * std::cos(phi), 0.5 * omega * std::sin(phi), 0.0};
    };
  }
  return [pulse](double t) { return PauliCoefficients{0.0, 0.5 * pulse.in_phase(t), 0.5 * pulse.quadrature(t), 0.0}; };
}

Hamiltonian2 QubitModel::hamiltonian() const {
  if (noise.is_zero()) return control;
  const PauliCoefficients v = noise.coefficients();
  return [h = control, v](double t) { return h(t) + v; };
}

QubitModel QubitModel::with_noise(const NoiseSpec& n) const {
  QubitModel m = *this;
  m.noise = n;
  return m;
}

Trajectory2 QubitModel::noiseless_trajectory(int steps) const {
  return propagate(control, duration, steps > 0 ? steps : default_steps(duration));
}

double QubitModel::fidelity(int steps) const {
  const Mat2 u = propagate_final(hamiltonian(), duration, steps > 0 ? steps : default_steps(duration));
  return gate_fidelity(u, target);
}

double DeviceModel::fidelity(int steps) const {
  const MatN u = propagate_final(hamiltonian, dim, duration, steps > 0 ? steps : default_steps(duration));
  return gate_fidelity(u, target);
}

Mat2 rotation_gate(Axis axis, double angle) { return rotation(axis, angle); }

}  // namespace qeed
