#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "qeed/pulse.hpp"
#include "qeed/su2.hpp"

namespace qeed::cli {

enum ExitCode { kOk = 0, kUsage = 1, kNotConverged = 2 };

// Thrown for bad user input; reported with exit code kUsage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  AmplitudeUnit unit = AmplitudeUnit::RadPerNs;
  bool quiet = false;
};

struct SynthesizeOptions {
  std::string gate = "Xpi";
  std::string robust = "z";
  int n = 3;
  int n_phase = -1;  // -1: n when a phase channel is needed
  std::string drive = "amplitude-phase";
  bool extended = false;
  double gate_time = 50.0;
  std::uint64_t seed = 1;
  int restarts = 5;
  int max_iterations = 400;
  double tolerance = 1e-5;
  int threads = 0;
  std::string init;  // optional starting pulse (file or library name)
  std::string out = "pulse.json";
  std::string trace;
};

struct EvaluateOptions {
  std::string pulse;
  std::string model = "auto";  // auto | single_qubit | xy_qubit
  std::string axes = "z";
  int magnus = 0;
  std::optional<double> angle;
  std::string json_out;
};

struct SweepOptions {
  std::string spec;
  std::string preset;
  std::string out;
  int workers = 0;
};

struct CurveOptions {
  std::string curve;
  std::string points;
  double gate_time = 50.0;
  double initial_phase = 0.0;
  int samples = 4001;
  int fit = 0;  // >0: also project onto n Fourier components
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> radius;
  std::string out = "pulse.json";
};

struct RescaleOptions {
  std::string pulse;
  std::optional<double> alpha;
  std::optional<double> gate_time;
  std::string out = "rescaled.json";
};

struct LibraryOptions {
  std::string action = "list";
  std::string name;
};

int run_synthesize(const GlobalOptions& g, const SynthesizeOptions& o);
int run_evaluate(const GlobalOptions& g, const EvaluateOptions& o);
int run_sweep(const GlobalOptions& g, const SweepOptions& o);
int run_curve2pulse(const GlobalOptions& g, const CurveOptions& o);
int run_rescale(const GlobalOptions& g, const RescaleOptions& o);
int run_library(const GlobalOptions& g, const LibraryOptions& o);

// "Xpi", "X3pi2", "Ypi4", "Z2pi", "X:1.2" -> (axis, angle).
std::pair<Axis, double> parse_gate(const std::string& s);

}  // namespace qeed::cli
