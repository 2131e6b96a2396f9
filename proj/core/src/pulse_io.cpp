#include "qeed/pulse_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "qeed/json_writer.hpp"

namespace qeed {

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

int line_of_field(const std::string& text, const std::string& field) {
  if (text.empty()) return 0;
  const auto pos = text.find('"' + field + '"');
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

struct FieldReader {
  const nlohmann::json& j;
  const std::string& source;
  const std::string& text;

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw PulseParseError(source, line_of_field(text, field), field, msg);
  }
  bool has(const std::string& field) const { return j.contains(field); }
  double number(const std::string& field) const {
    if (!has(field)) fail(field, "missing required field");
    if (!j[field].is_number()) fail(field, "expected a number");
    return j[field].get<double>();
  }
  std::vector<double> numbers(const std::string& field, bool required) const {
    if (!has(field)) {
      if (required) fail(field, "missing required field");
      return {};
    }
    const auto& v = j[field];
    if (!v.is_array()) fail(field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) fail(field, "element " + std::to_string(i) + " is not a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  AmplitudeUnit unit() const {
    if (!has("amplitude_unit")) return AmplitudeUnit::RadPerNs;
    if (!j["amplitude_unit"].is_string()) fail("amplitude_unit", "expected a string");
    try {
      return parse_amplitude_unit(j["amplitude_unit"].get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail("amplitude_unit", e.what());
    }
  }
};

}  // namespace

PulseParseError::PulseParseError(std::string source, int line, std::string field, const std::string& what)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << source;
        if (line > 0) os << ":" << line;
        if (!field.empty()) os << ": field '" << field << "'";
        os << ": " << what;
        return os.str();
      }()),
      source_(std::move(source)),
      line_(line),
      field_(std::move(field)) {}

ControlPulse PulseFile::pulse() const {
  if (fourier) return fourier_waveform(*fourier);
  const double scale = amplitude_scale(unit);
  std::vector<double> amp = amplitude;
  for (auto& v : amp) v *= scale;
  if (phase.empty()) return ControlPulse(duration, Waveform::sampled(std::move(amp), duration));
  return ControlPulse(duration, Waveform::sampled(std::move(amp), duration), Waveform::sampled(phase, duration));
}

void PulseFile::set_unit(AmplitudeUnit u) {
  unit = u;
  if (fourier) fourier->unit = u;
}

nlohmann::json to_json(const FourierPulseParams& p) {
  nlohmann::json j;
  j["n"] = p.n;
  j["T_ns"] = p.duration;
  j["a"] = p.a;
  j["phi"] = p.phi;
  j["b"] = p.b;
  j["psi"] = p.psi;
  j["amplitude_unit"] = to_string(p.unit);
  if (p.scheme == DriveScheme::InPhaseQuadrature) j["drive"] = "xy-quadrature";
  return j;
}

FourierPulseParams params_from_json(const nlohmann::json& j, const std::string& source, const std::string& text) {
  if (!j.is_object()) throw PulseParseError(source, 0, "", "expected a JSON object");
  const FieldReader r{j, source, text};
  FourierPulseParams p;
  p.duration = r.number("T_ns");
  if (!(p.duration > 0.0)) r.fail("T_ns", "gate time must be positive");
  p.a = r.numbers("a", true);
  p.phi = r.numbers("phi", true);
  p.b = r.numbers("b", false);
  p.psi = r.numbers("psi", false);
  p.unit = r.unit();
  if (r.has("drive")) {
    const auto& d = j["drive"];
    if (!d.is_string()) r.fail("drive", "expected a string");
    const auto s = d.get<std::string>();
    if (s == "xy-quadrature") {
      p.scheme = DriveScheme::InPhaseQuadrature;
    } else if (s != "amplitude-phase") {
      r.fail("drive", "unknown drive '" + s + "' (expected amplitude-phase or xy-quadrature)");
    }
  }
  if (p.a.empty()) r.fail("a", "needs at least a0");
  if (p.phi.size() + 1 != p.a.size()) r.fail("phi", "must have exactly one entry fewer than 'a'");
  if (!p.b.empty() && p.psi.size() + 1 != p.b.size()) r.fail("psi", "must have exactly one entry fewer than 'b'");
  if (p.b.empty() && !p.psi.empty()) r.fail("psi", "given without 'b'");
  const int inferred = p.inferred_components();
  if (r.has("n")) {
    if (!j["n"].is_number_integer()) r.fail("n", "expected an integer");
    p.n = j["n"].get<int>();
    if (p.n != inferred) {
      r.fail("n", "n = " + std::to_string(p.n) + " but array lengths imply " + std::to_string(inferred));
    }
  } else {
    p.n = inferred;
  }
  return p;
}

nlohmann::json sampled_pulse_json(double duration, const std::vector<double>& amplitude,
                                  const std::vector<double>& phase, AmplitudeUnit unit) {
  nlohmann::json j;
  j["T_ns"] = duration;
  j["omega"] = amplitude;
  j["phase"] = phase;
  j["amplitude_unit"] = to_string(unit);
  return j;
}

PulseFile parse_pulse(const std::string& text, const std::string& source) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw PulseParseError(source, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "", "syntax error");
  }
  PulseFile f;
  if (j.is_object() && j.contains("omega")) {
    const FieldReader r{j, source, text};
    f.duration = r.number("T_ns");
    if (!(f.duration > 0.0)) r.fail("T_ns", "gate time must be positive");
    f.amplitude = r.numbers("omega", true);
    f.phase = r.numbers("phase", false);
    f.unit = r.unit();
    if (f.amplitude.size() < 2) r.fail("omega", "need at least two samples");
    if (!f.phase.empty() && f.phase.size() != f.amplitude.size()) {
      r.fail("phase", "must have the same length as 'omega'");
    }
    return f;
  }
  f.fourier = params_from_json(j, source, text);
  f.duration = f.fourier->duration;
  f.unit = f.fourier->unit;
  return f;
}

PulseFile load_pulse(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PulseParseError(path.string(), 0, "", "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pulse(ss.str(), path.string());
}

void save_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_json(value);
}

}  // namespace qeed
