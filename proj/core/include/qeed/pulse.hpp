#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace qeed {

// Scalar function of time with a derivative. Cheap to copy (shared state).
class Waveform {
 public:
  using Function = std::function<double(double)>;

  Waveform();  // identically zero
  static Waveform constant(double value);
  // `derivative` may be empty; a central difference is used instead.
  static Waveform function(Function value, Function derivative = {});
  // Uniform samples on [0, duration] including both endpoints, interpolated by
  // cubic Hermite splines with finite-difference slopes.
  static Waveform sampled(std::vector<double> values, double duration);

  double operator()(double t) const { return value_(t); }
  double derivative(double t) const;

 private:
  Function value_;
  Function derivative_;
};

enum class DriveScheme {
  // H_c = (Omega/2)(cos Phi sx + sin Phi sy)
  AmplitudePhase,
  // H_c = (Omega_x/2) sx + (Omega_y/2) sy
  InPhaseQuadrature,
};

enum class AmplitudeUnit {
  RadPerNs,   // amplitudes are angular frequencies (rad/ns)
  GHzLinear,  // amplitudes are linear frequencies (GHz); multiplied by 2 pi
};

double amplitude_scale(AmplitudeUnit unit);
std::string to_string(AmplitudeUnit unit);
AmplitudeUnit parse_amplitude_unit(const std::string& s);

// Transverse control field over [0, duration]. Amplitudes in rad/ns.
class ControlPulse {
 public:
  ControlPulse() = default;
  ControlPulse(double duration, Waveform amplitude, Waveform phase = Waveform::constant(0.0));
  static ControlPulse in_phase_quadrature(double duration, Waveform x, Waveform y);

  double duration() const { return duration_; }
  DriveScheme scheme() const { return scheme_; }

  // Omega(t) and Phi(t) (AmplitudePhase) or the two quadratures (InPhaseQuadrature).
  double amplitude(double t) const { return first_(t); }
  double phase(double t) const;
  double amplitude_rate(double t) const { return first_.derivative(t); }
  double phase_rate(double t) const;

  // Coefficients of sx and sy in 2 H_c.
  double in_phase(double t) const;
  double quadrature(double t) const;

  const Waveform& first_channel() const { return first_; }
  const Waveform& second_channel() const { return second_; }

  // max |Omega| (AmplitudePhase) or max sqrt(Ox^2 + Oy^2), sampled.
  double max_amplitude(int samples = 4001) const;
  // \int Omega dt by composite Simpson.
  double area(int samples = 4001) const;

  ControlPulse with_phase_offset(double offset) const;

 private:
  double duration_ = 0.0;
  DriveScheme scheme_ = DriveScheme::AmplitudePhase;
  Waveform first_;
  Waveform second_;
};

// Fourier ansatz
//   Omega(t) = sin(pi t/T) (a0 + sum_j a_j cos(2 pi j t/T + phi_j))
//   Phi(t)   = b0 + sum_j b_j cos(2 pi j t/T + psi_j)
// For InPhaseQuadrature pulses (a, phi) drive sx and (b, psi) drive sy, both
// with the sine envelope.
struct FourierPulseParams {
  int n = 0;
  double duration = 50.0;  // T in ns
  std::vector<double> a;
  std::vector<double> phi;
  std::vector<double> b;
  std::vector<double> psi;
  AmplitudeUnit unit = AmplitudeUnit::RadPerNs;
  DriveScheme scheme = DriveScheme::AmplitudePhase;

  // Throws std::invalid_argument on inconsistent array lengths.
  void validate() const;
  // n implied by the array lengths.
  int inferred_components() const;
  // Flattened free parameters; phase parameters are included only when
  // `include_phase` (b, psi are otherwise held fixed).
  std::vector<double> pack(bool include_phase) const;
  void unpack(const std::vector<double>& x, bool include_phase);
  // New params with n harmonics on each channel, zero-padded.
  FourierPulseParams with_components(int n_amplitude, int n_phase) const;

  friend bool operator==(const FourierPulseParams&, const FourierPulseParams&) = default;
};

ControlPulse fourier_waveform(const FourierPulseParams& params);

// Least-squares projection of uniformly sampled waveforms (including both
// endpoints) onto the Fourier ansatz.
struct FourierFit {
  FourierPulseParams params;
  double residual_rms = 0.0;
  double relative_residual = 0.0;  // residual_rms / rms(input)
  double condition_number = 0.0;
  bool regularized = false;
  bool poor_fit = false;  // relative_residual above kPoorFitThreshold
  std::vector<std::string> warnings;
};

inline constexpr double kPoorFitThreshold = 1e-3;

FourierFit fit_fourier(const std::vector<double>& amplitude, double duration, int n,
                       const std::vector<double>& phase = {}, int n_phase = -1);

// t -> alpha t, Omega -> Omega / alpha.
ControlPulse rescale_pulse(const ControlPulse& pulse, double alpha);
FourierPulseParams rescale_params(const FourierPulseParams& params, double alpha);

// Reference waveforms.
// Omega_m (1 - cos(2 pi t/T))/2 with T chosen so the area equals `angle`.
ControlPulse cosine_pulse(double angle, double max_amplitude);
ControlPulse cosine_pulse_with_duration(double angle, double duration);
// A sin(pi t/T) with area `angle`.
ControlPulse sine_pulse(double angle, double duration);
ControlPulse square_pulse(double amplitude, double duration, double phase = 0.0);

}  // namespace qeed
