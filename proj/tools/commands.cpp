#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qeed/curve_library.hpp"
#include "qeed/curves.hpp"
#include "qeed/devices.hpp"
#include "qeed/geometry.hpp"
#include "qeed/json_writer.hpp"
#include "qeed/library.hpp"
#include "qeed/model.hpp"
#include "qeed/optimizer.hpp"
#include "qeed/pulse_io.hpp"
#include "qeed/robustness.hpp"
#include "qeed/sweep.hpp"

namespace qeed::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kPi = 3.141592653589793;

std::set<Axis> parse_axes(const std::string& s) {
  std::set<Axis> axes;
  for (char c : s) {
    if (c == ',' || c == ' ') continue;
    if (c != 'x' && c != 'y' && c != 'z') throw UsageError("axes must be drawn from x, y, z (got '" + s + "')");
    axes.insert(parse_axis(c));
  }
  if (axes.empty()) throw UsageError("no axes given");
  return axes;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

struct LoadedPulse {
  ControlPulse pulse;
  std::optional<FourierPulseParams> params;
  std::optional<double> angle;
  Axis axis = Axis::X;
  std::set<Axis> robust_axes;
  std::string label;
};

// Library name or pulse file. Files without an explicit amplitude unit take
// the global --amplitude-unit.
LoadedPulse load(const GlobalOptions& g, const std::string& ref) {
  LoadedPulse lp;
  lp.label = ref;
  const auto& lib = PulseLibrary::bundled();
  if (lib.contains(ref)) {
    const auto& e = lib.at(ref);
    lp.params = e.params;
    lp.pulse = e.pulse();
    lp.angle = e.angle;
    lp.axis = e.gate_axis;
    lp.robust_axes = e.robust_axes;
    return lp;
  }
  if (!fs::exists(ref)) throw UsageError("'" + ref + "' is neither a library pulse nor a file");
  const std::string text = read_file(ref);
  PulseFile f = parse_pulse(text, ref);
  // Optional "gate": {"axis": "x", "angle": theta} records the target.
  const json j = json::parse(text);
  if (!j.contains("amplitude_unit")) f.set_unit(g.unit);
  if (j.contains("gate")) {
    try {
      lp.angle = j.at("gate").at("angle").get<double>();
      lp.axis = parse_axis(j.at("gate").value("axis", std::string("x")).at(0));
    } catch (const json::exception&) {
      throw UsageError(ref + ": 'gate' needs a numeric 'angle'");
    }
  }
  if (f.fourier) lp.params = f.fourier;
  lp.pulse = f.pulse();
  return lp;
}

// Params in rad/ns re-expressed in `unit`.
FourierPulseParams to_unit(FourierPulseParams p, AmplitudeUnit unit) {
  const double s = 1.0 / amplitude_scale(unit);
  for (auto& a : p.a) a *= s;
  if (p.scheme == DriveScheme::InPhaseQuadrature) {
    for (auto& b : p.b) b *= s;
  }
  p.unit = unit;
  return p;
}

FourierPulseParams in_rad_per_ns(FourierPulseParams p) {
  const double s = amplitude_scale(p.unit);
  for (auto& a : p.a) a *= s;
  if (p.scheme == DriveScheme::InPhaseQuadrature) {
    for (auto& b : p.b) b *= s;
  }
  p.unit = AmplitudeUnit::RadPerNs;
  return p;
}

void note(const GlobalOptions& g, const std::string& s) {
  if (!g.quiet) std::cerr << s << '\n';
}

}  // namespace

std::pair<Axis, double> parse_gate(const std::string& s) {
  static const std::regex named(R"(([XYZxyz])(-?)(\d*)(pi)?(\d*))");
  static const std::regex numeric(R"(([XYZxyz]):(.+))");
  std::smatch m;
  if (std::regex_match(s, m, numeric)) {
    try {
      return {parse_axis(static_cast<char>(std::tolower(m[1].str()[0]))), std::stod(m[2].str())};
    } catch (const std::exception&) {
      throw UsageError("bad gate angle in '" + s + "'");
    }
  }
  if (!std::regex_match(s, m, named) || m[4].str().empty()) {
    throw UsageError("bad gate '" + s + "' (expected e.g. Xpi, X3pi2, Ypi4 or X:1.25)");
  }
  const double num = m[3].str().empty() ? 1.0 : std::stod(m[3].str());
  const double den = m[5].str().empty() ? 1.0 : std::stod(m[5].str());
  if (den == 0.0) throw UsageError("bad gate '" + s + "'");
  const double sign = m[2].str().empty() ? 1.0 : -1.0;
  return {parse_axis(static_cast<char>(std::tolower(m[1].str()[0]))), sign * num * kPi / den};
}

int run_synthesize(const GlobalOptions& g, const SynthesizeOptions& o) {
  const auto [axis, angle] = parse_gate(o.gate);
  if (axis == Axis::Z) throw UsageError("z rotations are not reachable with a transverse drive");
  const std::set<Axis> axes = parse_axes(o.robust);
  if (o.n < 0 || o.n > 8) throw UsageError("--n must be in [0, 8]");
  if (!(o.gate_time > 0.0)) throw UsageError("--gate-time must be positive");
  DriveScheme scheme;
  if (o.drive == "amplitude-phase") {
    scheme = DriveScheme::AmplitudePhase;
  } else if (o.drive == "xy") {
    scheme = DriveScheme::InPhaseQuadrature;
  } else {
    throw UsageError("--drive must be amplitude-phase or xy");
  }

  const bool transverse = axes.count(Axis::X) || axes.count(Axis::Y);
  const bool phase_free = transverse || scheme == DriveScheme::InPhaseQuadrature;
  int n_phase = o.n_phase;
  if (n_phase < 0) n_phase = phase_free ? o.n : (axis == Axis::Y ? 0 : -1);

  OptimizationConfig cfg;
  cfg.tolerance = o.tolerance;
  cfg.max_iterations = o.max_iterations;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.axes = axes;
  cfg.extended = o.extended;
  cfg.optimize_phase = phase_free;
  cfg.threads = o.threads > 0 ? o.threads : default_workers();
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  FourierPulseParams init;
  if (!o.init.empty()) {
    const LoadedPulse lp = load(g, o.init);
    if (!lp.params) throw UsageError("--init needs a Fourier-parametrized pulse");
    init = in_rad_per_ns(*lp.params);
  } else {
    init = initial_params(angle, o.gate_time, o.n, n_phase, scheme, o.seed);
    if (axis == Axis::Y && scheme == DriveScheme::AmplitudePhase) init.b[0] += kPi / 2.0;
    if (axis == Axis::Y && scheme == DriveScheme::InPhaseQuadrature) {
      std::swap(init.a, init.b);
      std::swap(init.phi, init.psi);
    }
  }

  const Mat2 target = rotation(axis, angle);
  const OptimizationResult res = optimize(init, target, cfg);
  const auto& tr = res.trace;

  json out = to_json(to_unit(res.params, g.unit));
  out["gate"] = {{"axis", std::string(1, axis_name(axis))}, {"angle", angle}};
  save_json(o.out, out);
  if (!o.trace.empty()) {
    json t;
    t["gate"] = {{"axis", std::string(1, axis_name(axis))}, {"angle", angle}};
    t["robust_axes"] = o.robust;
    t["extended"] = o.extended;
    t["seed"] = o.seed;
    t["converged"] = tr.converged;
    t["attempts"] = tr.attempts;
    t["best_attempt"] = tr.best_attempt;
    t["final"] = {{"cost", tr.final_cost.total}, {"infidelity", tr.final_cost.infidelity}, {"xi", tr.final_cost.xi}};
    json rows = json::array();
    for (const auto& e : tr.entries) {
      rows.push_back({{"attempt", e.attempt},
                      {"iteration", e.iteration},
                      {"cost", e.cost},
                      {"infidelity", e.infidelity},
                      {"xi", e.xi},
                      {"step", e.step}});
    }
    t["iterations"] = rows;
    save_json(o.trace, t);
  }

  char buf[256];
  std::snprintf(buf, sizeof buf, "%s  C = %.3e  (1-F = %.3e, xi = %.3e)  attempts %d  -> %s",
                tr.converged ? "converged" : "NOT converged", tr.final_cost.total, tr.final_cost.infidelity,
                tr.final_cost.xi, tr.attempts, o.out.c_str());
  std::cout << buf << '\n';
  return tr.converged ? kOk : kNotConverged;
}

int run_evaluate(const GlobalOptions& g, const EvaluateOptions& o) {
  const LoadedPulse lp = load(g, o.pulse);
  const std::set<Axis> axes = parse_axes(o.axes);
  if (o.magnus < 0 || o.magnus > kMaxMagnusOrder) {
    throw UsageError("--magnus must be between 0 and " + std::to_string(kMaxMagnusOrder));
  }
  const double angle = o.angle ? *o.angle : lp.angle.value_or(lp.pulse.area());
  const Axis gate_axis = o.angle ? Axis::X : lp.axis;
  const Mat2 target = rotation(gate_axis, angle);

  std::string model = o.model;
  if (model == "auto") {
    const bool transverse = axes.count(Axis::X) || axes.count(Axis::Y) || lp.pulse.scheme() == DriveScheme::InPhaseQuadrature;
    model = transverse ? "xy_qubit" : "single_qubit";
  }
  QubitModel q;
  if (model == "single_qubit") {
    q = single_qubit_detuned(lp.pulse, 0.0, target);
  } else if (model == "xy_qubit") {
    q = xy_driven_qubit(lp.pulse, NoiseSpec{}, target);
  } else {
    throw UsageError("--model must be auto, single_qubit or xy_qubit");
  }

  ReportOptions ro;
  ro.axes = axes;
  ro.magnus_order = o.magnus;
  const RobustnessReport rep = evaluate_robustness(q, lp.pulse.max_amplitude(), ro);
  std::cout << "pulse " << lp.label << "  target " << static_cast<char>(std::toupper(axis_name(gate_axis))) << "("
            << format_number(angle) << ")\n" << rep.table();
  if (!o.json_out.empty()) {
    json j = rep.to_json();
    j["pulse"] = lp.label;
    j["angle"] = angle;
    save_json(o.json_out, j);
  }
  return kOk;
}

namespace {

json grid(double start, double stop, int points) { return {{"start", start}, {"stop", stop}, {"points", points}}; }

struct PresetRun {
  std::string file;
  json spec;
};

std::vector<PresetRun> preset_runs(const std::string& name) {
  std::vector<PresetRun> runs;
  auto add = [&](std::string file, json spec) { runs.push_back({std::move(file), std::move(spec)}); };
  // Single-qubit gates with their cosine counterparts at equal peak amplitude.
  const std::vector<std::pair<std::string, double>> gates = {{"R1_perp_pi_refined", kPi},
                                                            {"R1_perp_7pi4_refined", kPi / 4},
                                                            {"R1_perp_5pi2_refined", kPi / 2},
                                                            {"R1_perp_2pi_refined", 2 * kPi}};
  if (name == "detuning") {
    for (const auto& [g, a] : gates) {
      json s = {{"model", "single_qubit"}, {"grid", grid(-0.2, 0.2, 161)}, {"normalization", "omega_max"}};
      s["pulse"] = g;
      add(g + ".csv", s);
      s["pulse"] = {{"cosine_of", g}, {"angle", a}};
      add("cosine_" + g + ".csv", s);
    }
    for (const std::string g : {"Rex_perp_pi", "Rex_perp_9pi4", "Rex_perp_5pi2", "Rex_perp_2pi"}) {
      add(g + ".csv", {{"model", "single_qubit"}, {"pulse", g}, {"grid", grid(-0.2, 0.2, 161)}, {"normalization", "omega_max"}});
    }
  } else if (name == "xy-noise") {
    json s = {{"model", "xy_pair"},
              {"grid", grid(-0.1, 0.1, 41)},
              {"grid2", grid(-0.1, 0.1, 41)},
              {"normalization", "omega_max"}};
    s["pulse"] = "R1_all_3pi2_refined";
    add("R1_all_3pi2_refined.csv", s);
    s["pulse"] = {{"cosine_of", "R1_all_3pi2_refined"}};
    add("cosine_R1_all_3pi2_refined.csv", s);
  } else if (name == "sqrt-swap") {
    json s = {{"model", "swap_subspace"}, {"grid", grid(-0.2, 0.2, 161)}, {"normalization", "omega_max"}};
    s["pulse"] = "R1_perp_5pi2_refined";
    add("sqrt_swap_R1_perp_5pi2_refined.csv", s);
    s["pulse"] = {{"cosine_of", "R1_perp_5pi2_refined"}, {"angle", kPi / 2}};
    add("sqrt_swap_cosine.csv", s);
  } else if (name == "zz-coupling") {
    add("dzz.csv", {{"model", "coupled_transmons"}, {"grid", grid(0.0, 2 * kPi * 0.02, 41)}});
  } else if (name == "spectator") {
    for (const auto& [g, a] : gates) {
      json s = {{"model", "spectator"}, {"grid", grid(-2 * kPi * 1e-3, 2 * kPi * 1e-3, 41)}, {"gate_time", 70.0}};
      s["pulse"] = g;
      add(g + ".csv", s);
      s["pulse"] = {{"cosine_of", g}, {"angle", a}};
      s.erase("gate_time");
      add("cosine_" + g + ".csv", s);
    }
  } else if (name == "iswap") {
    json s = {{"model", "iswap"}, {"grid", grid(-0.2, 0.2, 161)}, {"normalization", "omega_max"}};
    s["pulse"] = "R1_perp_pi_refined";
    add("iswap_R1_perp_pi_refined.csv", s);
    s["pulse"] = {{"cosine_of", "R1_perp_pi_refined"}};
    add("iswap_cosine.csv", s);
    s["pulse"] = "R1_perp_5pi2_refined";
    add("sqrt_iswap_R1_perp_5pi2_refined.csv", s);
    s["pulse"] = {{"cosine_of", "R1_perp_5pi2_refined"}, {"angle", kPi / 2}};
    add("sqrt_iswap_cosine.csv", s);
  } else {
    throw UsageError("unknown preset '" + name + "' (detuning, xy-noise, sqrt-swap, zz-coupling, spectator, iswap)");
  }
  return runs;
}

}  // namespace

int run_sweep(const GlobalOptions& g, const SweepOptions& o) {
  if (o.spec.empty() == o.preset.empty()) throw UsageError("give exactly one of a sweep spec file or --preset");
  const int workers = o.workers > 0 ? o.workers : default_workers();

  if (!o.spec.empty()) {
    json j;
    try {
      j = json::parse(read_file(o.spec));
    } catch (const json::parse_error& e) {
      throw UsageError(o.spec + ": " + e.what());
    }
    SweepSpec spec;
    try {
      spec = SweepSpec::from_json(j);
    } catch (const json::exception& e) {
      throw UsageError(o.spec + ": " + e.what());
    }
    const SweepResult r = qeed::run_sweep(spec, workers);
    const bool as_json = o.out.size() > 5 && o.out.substr(o.out.size() - 5) == ".json";
    write_text(o.out, as_json ? dump_json(r.to_json()) : r.csv());
    return kOk;
  }

  const fs::path dir = o.out.empty() ? fs::path("sweep-" + o.preset) : fs::path(o.out);
  fs::create_directories(dir);
  for (const auto& run : preset_runs(o.preset)) {
    const SweepResult r = qeed::run_sweep(SweepSpec::from_json(run.spec), workers);
    write_text((dir / run.file).string(), r.csv());
    fs::path meta = dir / run.file;
    meta.replace_extension(".json");
    json j = r.to_json();
    j["spec"] = run.spec;
    save_json(meta, j);
    note(g, "wrote " + (dir / run.file).string());
  }
  return kOk;
}

int run_curve2pulse(const GlobalOptions& g, const CurveOptions& o) {
  if (o.curve.empty() == o.points.empty()) throw UsageError("give exactly one of --curve or --points");
  if (!(o.gate_time > 0.0)) throw UsageError("--gate-time must be positive");
  if (o.samples < 16) throw UsageError("--samples must be at least 16");

  ParametricCurve curve;
  if (!o.curve.empty()) {
    CurveParams cp;
    cp.alpha = o.alpha;
    cp.beta = o.beta;
    cp.radius = o.radius;
    try {
      curve = curve_library(o.curve, cp).curve;
    } catch (const std::out_of_range&) {
      std::string names;
      for (const auto& n : curve_library_names()) names += " " + n;
      throw UsageError("unknown curve '" + o.curve + "'; known:" + names);
    }
  } else {
    json j;
    try {
      j = json::parse(read_file(o.points));
    } catch (const json::parse_error& e) {
      throw UsageError(o.points + ": " + e.what());
    }
    const json& pts = j.is_object() ? j.at("points") : j;
    std::vector<Vec3> v;
    for (const auto& p : pts) {
      if (!p.is_array() || p.size() < 2 || p.size() > 3) throw UsageError(o.points + ": points must be [x, y] or [x, y, z]");
      v.emplace_back(p[0].get<double>(), p[1].get<double>(), p.size() == 3 ? p[2].get<double>() : 0.0);
    }
    if (v.size() < 4) throw UsageError(o.points + ": need at least four points");
    curve = ParametricCurve::from_points(fs::path(o.points).stem().string(), v);
  }

  SynthesizedPulse sp;
  try {
    sp = curve_to_pulse(curve, o.gate_time, o.initial_phase, o.samples);
  } catch (const NonRegularCurveError& e) {
    throw UsageError(e.what());
  }

  // Closure check on the simulated z-error curve.
  const double T = o.gate_time;
  const Trajectory2 traj = propagate(drive_hamiltonian(sp.pulse), T, default_steps(T));
  const ErrorCurve ec = error_curve(traj, Axis::Z);
  const double dist = error_distance(ec);
  const double area = net_area(ec).norm();

  const double scale = 1.0 / amplitude_scale(g.unit);
  std::vector<double> amp = sp.amplitude_samples();
  for (auto& a : amp) a *= scale;
  json out = sampled_pulse_json(T, amp, sp.phase, g.unit);
  if (o.fit > 0 && sp.planar) {
    const FourierFit fit = fit_fourier(sp.amplitude_samples(), T, o.fit);
    out["fourier_fit"] = to_json(to_unit(fit.params, g.unit));
    out["fourier_fit"]["relative_residual"] = fit.relative_residual;
    if (fit.poor_fit) note(g, "warning: Fourier fit residual " + format_number(fit.relative_residual));
  }
  save_json(o.out, out);

  char buf[320];
  std::snprintf(buf, sizeof buf,
                "curve %s  L = %.6g  alpha = %.6g ns  rotation = %.6g rad  %s\n"
                "|r(T)|/T = %.3e  |R(T)|/T^2 = %.3e  Omega_m = %.6g rad/ns  -> %s",
                curve.name().c_str(), sp.length, sp.alpha, sp.total_rotation, sp.planar ? "planar" : "space curve",
                dist / T, area / (T * T), sp.pulse.max_amplitude(), o.out.c_str());
  std::cout << buf << '\n';
  return kOk;
}

int run_rescale(const GlobalOptions& g, const RescaleOptions& o) {
  if (o.alpha.has_value() == o.gate_time.has_value()) throw UsageError("give exactly one of --alpha or --gate-time");
  const LoadedPulse lp = load(g, o.pulse);
  const double alpha = o.alpha ? *o.alpha : *o.gate_time / lp.pulse.duration();
  if (!(alpha > 0.0)) throw UsageError("rescale factor must be positive");
  json out;
  if (lp.params) {
    out = to_json(rescale_params(*lp.params, alpha));
  } else {
    PulseFile f = parse_pulse(read_file(o.pulse), o.pulse);
    for (auto& a : f.amplitude) a /= alpha;
    out = sampled_pulse_json(f.duration * alpha, f.amplitude, f.phase, f.unit);
  }
  if (lp.angle) out["gate"] = {{"axis", std::string(1, axis_name(lp.axis))}, {"angle", *lp.angle}};
  save_json(o.out, out);
  std::cout << "T = " << format_number(lp.pulse.duration()) << " ns -> " << format_number(lp.pulse.duration() * alpha)
            << " ns  -> " << o.out << '\n';
  return kOk;
}

int run_library(const GlobalOptions& g, const LibraryOptions& o) {
  const auto& lib = PulseLibrary::bundled();
  if (o.action == "list") {
    for (const auto& e : lib.entries()) {
      std::string axes;
      for (Axis a : e.robust_axes) axes += axis_name(a);
      char buf[256];
      std::snprintf(buf, sizeof buf, "%-24s %-8s X(%-8.5f) robust %-3s %s n=%d", e.name.c_str(), e.variant.c_str(),
                    e.angle, axes.c_str(), e.extended ? "extended" : "        ", e.params.n);
      std::cout << buf << '\n';
    }
    return kOk;
  }
  if (o.action == "show") {
    if (!lib.contains(o.name)) throw UsageError("no library pulse named '" + o.name + "'");
    const auto& e = lib.at(o.name);
    json j = to_json(to_unit(e.params, g.unit));
    j["name"] = e.name;
    j["note"] = e.note;
    j["angle"] = e.angle;
    std::cout << dump_json(j) << '\n';
    return kOk;
  }
  throw UsageError("library action must be list or show");
}

}  // namespace qeed::cli
