#include "qeed/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qeed/devices.hpp"
#include "qeed/json_writer.hpp"
#include "qeed/library.hpp"
#include "qeed/model.hpp"
#include "qeed/pulse_io.hpp"

namespace qeed {

namespace {

constexpr double kPi = std::numbers::pi;

double param_or(const nlohmann::json& p, const char* key, double fallback) {
  return p.contains(key) ? p.at(key).get<double>() : fallback;
}

}  // namespace

Normalization parse_normalization(const std::string& s) {
  if (s == "absolute") return Normalization::Absolute;
  if (s == "omega_max") return Normalization::OmegaMax;
  if (s == "inverse_time") return Normalization::InverseTime;
  throw std::invalid_argument("unknown normalization '" + s + "' (expected absolute, omega_max or inverse_time)");
}

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::OmegaMax:
      return "omega_max";
    case Normalization::InverseTime:
      return "inverse_time";
    default:
      return "absolute";
  }
}

std::vector<double> parse_grid(const nlohmann::json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) {
    const double a = j.at("start").get<double>(), b = j.at("stop").get<double>();
    const int n = j.at("points").get<int>();
    if (n < 1) throw std::invalid_argument("grid: points must be positive");
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) g[static_cast<std::size_t>(k)] = n == 1 ? a : a + (b - a) * k / (n - 1);
    return g;
  }
  throw std::invalid_argument("grid: expected an array or {start, stop, points}");
}

SweepSpec SweepSpec::from_json(const nlohmann::json& j) {
  SweepSpec s;
  s.model = j.at("model").get<std::string>();
  s.pulse = j.value("pulse", nlohmann::json());
  s.axis = j.value("axis", std::string("z")).at(0);
  s.grid = parse_grid(j.at("grid"));
  if (j.contains("grid2")) s.grid2 = parse_grid(j.at("grid2"));
  s.normalization = parse_normalization(j.value("normalization", std::string("absolute")));
  if (j.contains("angle")) s.angle = j.at("angle").get<double>();
  if (j.contains("gate_time")) s.gate_time = j.at("gate_time").get<double>();
  s.steps = j.value("steps", 0);
  if (j.contains("params")) s.params = j.at("params");
  return s;
}

nlohmann::json SweepSpec::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["pulse"] = pulse;
  j["axis"] = std::string(1, axis);
  j["grid"] = grid;
  if (!grid2.empty()) j["grid2"] = grid2;
  j["normalization"] = qeed::to_string(normalization);
  if (angle) j["angle"] = *angle;
  if (gate_time) j["gate_time"] = *gate_time;
  j["steps"] = steps;
  j["params"] = params;
  return j;
}

ResolvedPulse resolve_pulse(const nlohmann::json& spec, const std::optional<double>& gate_time) {
  ResolvedPulse r;
  if (spec.is_string()) {
    const auto& e = PulseLibrary::bundled().at(spec.get<std::string>());
    r.pulse = e.pulse();
    r.angle = e.angle;
    r.label = e.name;
  } else if (spec.is_object() && spec.contains("cosine")) {
    const auto& c = spec.at("cosine");
    r.angle = c.at("angle").get<double>();
    r.pulse = cosine_pulse(r.angle, c.at("max_amplitude").get<double>());
    r.label = "cosine";
  } else if (spec.is_object() && spec.contains("cosine_of")) {
    const auto& e = PulseLibrary::bundled().at(spec.at("cosine_of").get<std::string>());
    r.angle = spec.value("angle", e.angle);
    r.pulse = cosine_pulse(r.angle, e.pulse().max_amplitude());
    r.label = "cosine_of_" + e.name;
  } else if (spec.is_object() && spec.contains("file")) {
    const std::string path = spec.at("file").get<std::string>();
    r.pulse = load_pulse(path).pulse();
    r.angle = spec.value("angle", r.pulse.area());
    r.label = path;
  } else {
    throw std::invalid_argument("sweep: unrecognized pulse reference " + spec.dump());
  }
  if (gate_time) r.pulse = rescale_pulse(r.pulse, *gate_time / r.pulse.duration());
  return r;
}

int default_workers() {
  if (const char* env = std::getenv("QEED_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

namespace {

using PointFn = std::function<SweepRow(double, double)>;

PointFn make_point_function(const SweepSpec& spec, const ResolvedPulse& rp, double scale) {
  const auto& p = spec.params;
  const double theta = spec.angle.value_or(rp.angle);
  const int steps = spec.steps;
  const ControlPulse pulse = rp.pulse;
  const Mat2 target = rotation(Axis::X, theta);
  auto row = [](double x, double y, double f) { return SweepRow{x, y, f, 1.0 - f, 0.0, 0.0}; };

  if (spec.model == "single_qubit") {
    return [=](double x, double) { return row(x, 0, single_qubit_detuned(pulse, x * scale, target).fidelity(steps)); };
  }
  if (spec.model == "xy_qubit") {
    const Axis axis = parse_axis(spec.axis);
    return [=](double x, double) {
      return row(x, 0, xy_driven_qubit(pulse, NoiseSpec::along(axis, 0.5 * x * scale), target).fidelity(steps));
    };
  }
  if (spec.model == "xy_pair") {
    return [=](double x, double y) {
      return row(x, y,
                 xy_driven_qubit(pulse, NoiseSpec::transverse_pair(x * scale, y * scale), target).fidelity(steps));
    };
  }
  if (spec.model == "double_dot") {
    QuantumDotParams q;
    q.zeeman_difference = param_or(p, "zeeman_difference", q.zeeman_difference);
    return [=](double x, double) {
      QuantumDotParams qq = q;
      qq.exchange = x * scale;
      return row(x, 0, double_dot(qq, pulse, theta).fidelity(steps));
    };
  }
  if (spec.model == "swap_subspace") {
    return [=](double x, double) { return row(x, 0, swap_subspace(pulse, x * scale).fidelity(steps)); };
  }
  if (spec.model == "transmon" || spec.model == "spectator") {
    TransmonParams t;
    t.anharmonicity = param_or(p, "anharmonicity", t.anharmonicity);
    t.levels = p.value("levels", t.levels);
    const double drag = p.contains("drag") ? p.at("drag").get<double>() : tune_drag(t, pulse, theta, steps).coefficient;
    if (spec.model == "transmon") {
      return [=](double x, double) {
        TransmonParams tt = t;
        tt.detuning = x * scale;
        return row(x, 0, transmon_single(tt, pulse, theta, drag).fidelity(steps));
      };
    }
    return [=](double x, double) { return row(x, 0, spectator_qubit_fidelity(t, pulse, theta, drag, x * scale, steps)); };
  }
  if (spec.model == "iswap") {
    return [=](double x, double) { return row(x, 0, iswap_coupler(pulse, x * scale, theta).fidelity(steps)); };
  }
  if (spec.model == "coupled_transmons") {
    CoupledTransmonParams c;
    c.omega1 = param_or(p, "omega1", c.omega1);
    c.omega2 = param_or(p, "omega2", c.omega2);
    c.u1 = param_or(p, "u1", c.u1);
    c.u2 = param_or(p, "u2", c.u2);
    return [=](double x, double) {
      CoupledTransmonParams cc = c;
      cc.coupling = x * scale;
      const ZZValues z = coupled_transmons(cc);
      return SweepRow{x, 0.0, 0.0, 0.0, z.exact, z.perturbative};
    };
  }
  throw std::invalid_argument("sweep: unknown model '" + spec.model + "'");
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec, int workers) {
  if (spec.grid.empty()) throw std::invalid_argument("sweep: empty grid");
  if (spec.model == "xy_pair" && spec.grid2.empty()) throw std::invalid_argument("sweep: xy_pair needs grid2");
  SweepResult res;
  res.model = spec.model;
  ResolvedPulse rp;
  double scale = 1.0;
  if (spec.model != "coupled_transmons") {
    rp = resolve_pulse(spec.pulse, spec.gate_time);
    res.pulse = rp.label;
    if (spec.normalization == Normalization::OmegaMax) scale = rp.pulse.max_amplitude();
    if (spec.normalization == Normalization::InverseTime) scale = 2.0 * kPi / rp.pulse.duration();
  } else if (spec.normalization != Normalization::Absolute) {
    throw std::invalid_argument("sweep: coupled_transmons takes absolute couplings");
  }
  const PointFn fn = make_point_function(spec, rp, scale);

  std::vector<std::pair<double, double>> points;
  res.two_dimensional = spec.model == "xy_pair";
  if (res.two_dimensional) {
    for (double x : spec.grid) {
      for (double y : spec.grid2) points.emplace_back(x, y);
    }
  } else {
    for (double x : spec.grid) points.emplace_back(x, 0.0);
  }
  res.rows.resize(points.size());

  if (workers <= 0) workers = default_workers();
  workers = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        res.rows[i] = fn(points[i].first, points[i].second);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  res.metadata = {{"model", spec.model},
                  {"pulse", res.pulse},
                  {"normalization", to_string(spec.normalization)},
                  {"scale", scale},
                  {"steps", spec.steps > 0 ? spec.steps : (rp.pulse.duration() > 0 ? default_steps(rp.pulse.duration()) : 0)},
                  {"points", points.size()},
                  {"version", "0.1.0"}};
  return res;
}

std::string SweepResult::csv() const {
  std::ostringstream os;
  if (model == "coupled_transmons") {
    os << "g,dzz_exact,dzz_perturbative\n";
    for (const auto& r : rows) {
      os << format_number(r.param) << ',' << format_number(r.exact) << ',' << format_number(r.perturbative) << '\n';
    }
    return os.str();
  }
  os << (two_dimensional ? "param,param2,fidelity,infidelity\n" : "param,fidelity,infidelity\n");
  for (const auto& r : rows) {
    os << format_number(r.param) << ',';
    if (two_dimensional) os << format_number(r.param2) << ',';
    os << format_number(r.fidelity) << ',' << format_number(r.infidelity) << '\n';
  }
  return os.str();
}

nlohmann::json SweepResult::to_json() const {
  nlohmann::json j;
  j["metadata"] = metadata;
  nlohmann::json grid = nlohmann::json::array(), f = nlohmann::json::array();
  for (const auto& r : rows) {
    if (two_dimensional) {
      grid.push_back({r.param, r.param2});
    } else {
      grid.push_back(r.param);
    }
    if (model == "coupled_transmons") {
      f.push_back({r.exact, r.perturbative});
    } else {
      f.push_back(r.fidelity);
    }
  }
  j["grid"] = grid;
  j[model == "coupled_transmons" ? "dzz" : "fidelity"] = f;
  return j;
}

}  // namespace qeed
