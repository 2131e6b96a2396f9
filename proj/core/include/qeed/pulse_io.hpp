#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeed/pulse.hpp"

namespace qeed {

// Malformed pulse file. `line` is 0 when unknown.
class PulseParseError : public std::runtime_error {
 public:
  PulseParseError(std::string source, int line, std::string field, const std::string& what);
  const std::string& source() const { return source_; }
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  std::string source_;
  int line_;
  std::string field_;
};

// A pulse as stored on disk: either Fourier parameters
//   {n, T_ns, a, phi, b, psi, amplitude_unit}
// (plus "drive": "xy-quadrature" for in-phase/quadrature pulses), or a sampled
// waveform {T_ns, omega, phase, amplitude_unit} on a uniform grid.
struct PulseFile {
  std::optional<FourierPulseParams> fourier;
  double duration = 0.0;
  std::vector<double> amplitude;
  std::vector<double> phase;
  AmplitudeUnit unit = AmplitudeUnit::RadPerNs;

  bool is_fourier() const { return fourier.has_value(); }
  ControlPulse pulse() const;
  // Replaces the amplitude unit (used by the CLI override flag).
  void set_unit(AmplitudeUnit u);
};

nlohmann::json to_json(const FourierPulseParams& params);
FourierPulseParams params_from_json(const nlohmann::json& j, const std::string& source = "<json>",
                                    const std::string& text = {});
nlohmann::json sampled_pulse_json(double duration, const std::vector<double>& amplitude,
                                  const std::vector<double>& phase, AmplitudeUnit unit = AmplitudeUnit::RadPerNs);

PulseFile parse_pulse(const std::string& text, const std::string& source = "<string>");
PulseFile load_pulse(const std::filesystem::path& path);
void save_json(const std::filesystem::path& path, const nlohmann::json& value);

}  // namespace qeed
