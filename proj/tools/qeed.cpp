// qeed: robust pulse synthesis, evaluation and sweeps from the command line.

#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "qeed/pulse_io.hpp"

using namespace qeed::cli;

int main(int argc, char** argv) {
  CLI::App app{"Error-curve tools for robust single- and two-qubit control pulses"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qeed 0.1.0");

  GlobalOptions global;
  std::string unit = "rad-per-ns";
  app.add_option("--amplitude-unit", unit, "Unit of pulse amplitudes in files without an explicit unit")
      ->check(CLI::IsMember({"rad-per-ns", "GHz-linear"}));
  app.add_flag("-q,--quiet", global.quiet, "Suppress progress notes");

  SynthesizeOptions syn;
  auto* s = app.add_subcommand("synthesize", "Optimize a Fourier-ansatz robust pulse");
  s->add_option("--gate", syn.gate, "Target rotation, e.g. Xpi, X3pi2, Ypi2, X:1.25")->capture_default_str();
  s->add_option("--robust", syn.robust, "Noise axes to close the error curves of (subset of xyz)")->capture_default_str();
  s->add_option("--n", syn.n, "Harmonics of the amplitude channel")->capture_default_str();
  s->add_option("--n-phase", syn.n_phase, "Harmonics of the phase channel (default: --n when needed)");
  s->add_option("--drive", syn.drive, "Drive parametrization")
      ->check(CLI::IsMember({"amplitude-phase", "xy"}))
      ->capture_default_str();
  s->add_flag("--extended", syn.extended, "Also penalize the detuned grid {0, pi/T}");
  s->add_option("--gate-time", syn.gate_time, "Gate time in ns")->capture_default_str();
  s->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
  s->add_option("--restarts", syn.restarts, "Attempts including the first")->capture_default_str();
  s->add_option("--max-iterations", syn.max_iterations, "Iterations per attempt")->capture_default_str();
  s->add_option("--tolerance", syn.tolerance, "Convergence threshold on the cost")->capture_default_str();
  s->add_option("--threads", syn.threads, "Gradient threads (default: QEED_WORKERS or all cores)");
  s->add_option("--init", syn.init, "Starting pulse (file or library name)");
  s->add_option("-o,--out", syn.out, "Output pulse file")->capture_default_str();
  s->add_option("--trace", syn.trace, "Write the optimization trace as JSON");

  EvaluateOptions ev;
  auto* e = app.add_subcommand("evaluate", "Error distances, net areas and Magnus terms of a pulse");
  e->add_option("pulse", ev.pulse, "Pulse file or library name")->required();
  e->add_option("--model", ev.model, "auto, single_qubit or xy_qubit")->capture_default_str();
  e->add_option("--axes", ev.axes, "Noise axes")->capture_default_str();
  e->add_option("--magnus", ev.magnus, "Highest Magnus order to report (0-4)")->capture_default_str();
  e->add_option("--angle", ev.angle, "Target x rotation angle (default: library angle or pulse area)");
  e->add_option("--json", ev.json_out, "Also write the report as JSON");

  SweepOptions sw;
  auto* w = app.add_subcommand("sweep", "Fidelity versus noise or device parameter");
  w->add_option("spec", sw.spec, "Sweep definition (JSON)");
  w->add_option("--preset", sw.preset, "Built-in data set: detuning, xy-noise, sqrt-swap, zz-coupling, spectator, iswap");
  w->add_option("-o,--out", sw.out, "CSV (or .json) output; a directory for presets");
  w->add_option("--workers", sw.workers, "Worker threads (default: QEED_WORKERS or all cores)");

  CurveOptions cv;
  auto* c = app.add_subcommand("curve2pulse", "Turn a space curve into a control pulse");
  c->add_option("--curve", cv.curve, "Library curve name");
  c->add_option("--points", cv.points, "JSON file with sampled points [[x, y, z], ...]");
  c->add_option("--gate-time", cv.gate_time, "Gate time in ns")->capture_default_str();
  c->add_option("--phase", cv.initial_phase, "Initial drive phase")->capture_default_str();
  c->add_option("--samples", cv.samples, "Arc-length samples")->capture_default_str();
  c->add_option("--fit", cv.fit, "Also fit n Fourier components (plane curves)");
  c->add_option("--alpha", cv.alpha, "Curve parameter alpha");
  c->add_option("--beta", cv.beta, "Curve parameter beta");
  c->add_option("--radius", cv.radius, "Circle radius");
  c->add_option("-o,--out", cv.out, "Output pulse file")->capture_default_str();

  RescaleOptions rs;
  auto* r = app.add_subcommand("rescale", "Stretch a pulse in time keeping its area");
  r->add_option("pulse", rs.pulse, "Pulse file or library name")->required();
  auto* ra = r->add_option("--alpha", rs.alpha, "Time stretch factor");
  auto* rt = r->add_option("--gate-time", rs.gate_time, "New gate time in ns");
  ra->excludes(rt);
  r->add_option("-o,--out", rs.out, "Output pulse file")->capture_default_str();

  LibraryOptions lb;
  auto* l = app.add_subcommand("library", "List or show bundled pulses");
  l->add_option("action", lb.action, "list or show")->check(CLI::IsMember({"list", "show"}))->capture_default_str();
  l->add_option("name", lb.name, "Pulse name for show");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kOk : kUsage;
  }
  global.unit = qeed::parse_amplitude_unit(unit);

  try {
    if (s->parsed()) return run_synthesize(global, syn);
    if (e->parsed()) return run_evaluate(global, ev);
    if (w->parsed()) return run_sweep(global, sw);
    if (c->parsed()) return run_curve2pulse(global, cv);
    if (r->parsed()) return run_rescale(global, rs);
    if (l->parsed()) return run_library(global, lb);
  } catch (const UsageError& err) {
    std::cerr << "qeed: " << err.what() << '\n';
    return kUsage;
  } catch (const qeed::PulseParseError& err) {
    std::cerr << "qeed: " << err.what() << '\n';
    return kUsage;
  } catch (const std::exception& err) {
    std::cerr << "qeed: error: " << err.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
