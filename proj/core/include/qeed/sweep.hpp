#pragma once

// Fidelity sweeps over a noise or device parameter.
//
// Sweep definition (JSON):
//   {
//     "model": "single_qubit" | "xy_qubit" | "xy_pair" | "double_dot" | "swap_subspace" |
//              "transmon" | "spectator" | "iswap" | "coupled_transmons",
//     "pulse": "<library name>" | {"cosine": {"angle": a, "max_amplitude": m}}
//              | {"cosine_of": "<library name>", "angle": a} | {"file": "<pulse json>"},
//     "axis": "z",                        // xy_qubit only
//     "grid": [..] | {"start": a, "stop": b, "points": n},
//     "grid2": ...,                       // xy_pair: epsilon axis
//     "normalization": "absolute" | "omega_max" | "inverse_time",
//     "angle": theta,                     // target rotation (defaults to the pulse's)
//     "gate_time": T,                     // rescale the pulse to this duration (ns)
//     "steps": 0,
//     "params": {...}                     // model constants, rad/ns
//   }
// Grid values are multiplied by the normalization scale (Omega_m, 2 pi / T or 1)
// before entering the model.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qeed/pulse.hpp"
#include "qeed/su2.hpp"

namespace qeed {

enum class Normalization { Absolute, OmegaMax, InverseTime };
Normalization parse_normalization(const std::string& s);
std::string to_string(Normalization n);

struct SweepSpec {
  std::string model = "single_qubit";
  nlohmann::json pulse;
  char axis = 'z';
  std::vector<double> grid;
  std::vector<double> grid2;
  Normalization normalization = Normalization::Absolute;
  std::optional<double> angle;
  std::optional<double> gate_time;
  int steps = 0;
  nlohmann::json params = nlohmann::json::object();

  static SweepSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

std::vector<double> parse_grid(const nlohmann::json& j);

struct SweepRow {
  double param = 0.0;
  double param2 = 0.0;
  double fidelity = 0.0;
  double infidelity = 0.0;
  // coupled_transmons: exact and perturbative delta_zz.
  double exact = 0.0;
  double perturbative = 0.0;
};

struct SweepResult {
  std::string model;
  std::string pulse;
  bool two_dimensional = false;
  std::vector<SweepRow> rows;
  nlohmann::json metadata;

  // Columns param,fidelity,infidelity (param,param2,... for 2-D grids;
  // g,dzz_exact,dzz_perturbative for coupled_transmons), %.17g numbers.
  std::string csv() const;
  nlohmann::json to_json() const;
};

// Resolved pulse of a sweep: waveform, nominal angle and label.
struct ResolvedPulse {
  ControlPulse pulse;
  double angle = 0.0;
  std::string label;
};
ResolvedPulse resolve_pulse(const nlohmann::json& pulse, const std::optional<double>& gate_time = std::nullopt);

// Worker count from QEED_WORKERS, else the hardware concurrency.
int default_workers();

// Evaluates every grid point (in parallel); rows are in grid order.
SweepResult run_sweep(const SweepSpec& spec, int workers = 0);

}  // namespace qeed
