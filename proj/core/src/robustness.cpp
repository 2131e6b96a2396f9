#include "qeed/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qeed {

double error_distance(const ErrorCurve& curve) { return curve.points.empty() ? 0.0 : curve.endpoint().norm(); }

Vec3 net_area(const ErrorCurve& curve) {
  Vec3 total = Vec3::Zero();
  Vec3 prev = Vec3::Zero();
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const Vec3 f = curve.tangents[k].cross(curve.points[k]);
    if (k > 0) total += 0.5 * (curve.times[k] - curve.times[k - 1]) * (f + prev);
    prev = f;
  }
  return total;
}

namespace {

using Series = std::vector<Vec3>;

// In the representation X = -i x.s, [X, Y] corresponds to 2 x cross y.
Vec3 bracket(const Vec3& x, const Vec3& y) { return 2.0 * x.cross(y); }

Series cumulative(const std::vector<double>& t, const Series& f) {
  Series out(f.size(), Vec3::Zero());
  for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * (t[k] - t[k - 1]) * (f[k] + f[k - 1]);
  return out;
}

Series bracket_series(const Series& a, const Series& b) {
  Series out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = bracket(a[k], b[k]);
  return out;
}

}  // namespace

MagnusCoefficients magnus_coefficients(const ErrorCurve& curve, int order) {
  if (order < 1 || order > kMaxMagnusOrder) {
    throw std::invalid_argument("magnus_coefficients: order must be between 1 and 4");
  }
  const std::size_t n = curve.size();
  // Bernoulli numbers B_j / j!.
  const double coef[] = {1.0, -0.5, 1.0 / 12.0, 0.0};
  const Series& a = curve.tangents;

  // omega[m] = Omega_m(t), s[m][j] = S_m^(j)(t).
  std::vector<Series> omega(static_cast<std::size_t>(order) + 1);
  std::vector<std::vector<Series>> s(static_cast<std::size_t>(order) + 1,
                                     std::vector<Series>(static_cast<std::size_t>(order) + 1));
  omega[1] = cumulative(curve.times, a);
  for (int m = 2; m <= order; ++m) {
    const auto um = static_cast<std::size_t>(m);
    s[um][1] = bracket_series(omega[um - 1], a);
    for (int j = 2; j <= m - 1; ++j) {
      Series acc(n, Vec3::Zero());
      for (int p = 1; p <= m - j; ++p) {
        const Series term = bracket_series(omega[static_cast<std::size_t>(p)],
                                           s[static_cast<std::size_t>(m - p)][static_cast<std::size_t>(j - 1)]);
        for (std::size_t k = 0; k < n; ++k) acc[k] += term[k];
      }
      s[um][static_cast<std::size_t>(j)] = std::move(acc);
    }
    Series integrand(n, Vec3::Zero());
    for (int j = 1; j <= m - 1; ++j) {
      for (std::size_t k = 0; k < n; ++k) integrand[k] += coef[j] * s[um][static_cast<std::size_t>(j)][k];
    }
    omega[um] = cumulative(curve.times, integrand);
  }

  MagnusCoefficients out;
  out.axis = curve.axis;
  for (int m = 1; m <= order; ++m) {
    const Vec3 v = omega[static_cast<std::size_t>(m)].back();
    out.vectors.push_back(v);
    out.norms.push_back(v.norm());
    out.rescaled.push_back(std::pow(10.0, -m) * v.norm());
  }
  return out;
}

std::string to_string(Correctability c) {
  return c == Correctability::NonCorrectable ? "non-correctable" : "possibly-correctable";
}

CorrectabilityResult correctability_check(const Hamiltonian2& control, const PauliCoefficients& noise, double duration,
                                          int samples) {
  if (samples < 1) throw std::invalid_argument("correctability_check: samples must be positive");
  const Vec3 v = noise.vector();
  CorrectabilityResult r;
  Vec3 first = Vec3::Zero();
  for (int k = 0; k < samples; ++k) {
    const double t = samples == 1 ? 0.0 : duration * k / (samples - 1);
    const Vec3 h = control(t).vector();
    r.max_commutator = std::max(r.max_commutator, 2.0 * v.cross(h).norm());
    if (first.isZero(0.0)) {
      first = h;
    } else if (2.0 * first.cross(h).norm() > kCommutatorTolerance) {
      r.two_noncommuting_directions = true;
    }
  }
  r.verdict = r.max_commutator < kCommutatorTolerance ? Correctability::NonCorrectable
                                                      : Correctability::PossiblyCorrectable;
  return r;
}

const AxisRobustness& RobustnessReport::at(Axis axis) const {
  for (const auto& a : axes) {
    if (a.axis == axis) return a;
  }
  throw std::out_of_range(std::string("no robustness entry for axis ") + axis_name(axis));
}

nlohmann::json RobustnessReport::to_json() const {
  nlohmann::json j;
  j["model"] = model;
  j["T_ns"] = duration;
  j["max_amplitude"] = max_amplitude;
  j["noiseless_fidelity"] = noiseless_fidelity;
  j["noiseless_infidelity"] = 1.0 - noiseless_fidelity;
  nlohmann::json ax = nlohmann::json::object();
  for (const auto& a : axes) {
    nlohmann::json e;
    e["error_distance"] = a.error_distance;
    e["error_distance_over_T"] = a.error_distance / duration;
    e["net_area"] = {a.net_area.x(), a.net_area.y(), a.net_area.z()};
    e["net_area_over_T2"] = a.net_area.norm() / (duration * duration);
    if (!a.magnus.empty()) e["magnus_rescaled"] = a.magnus;
    ax[std::string(1, axis_name(a.axis))] = e;
  }
  j["axes"] = ax;
  nlohmann::json ref = nlohmann::json::array();
  for (const auto& r : reference) {
    ref.push_back({{"axis", std::string(1, axis_name(r.axis))},
                   {"relative_strength", r.relative_strength},
                   {"fidelity", r.fidelity},
                   {"infidelity", 1.0 - r.fidelity}});
  }
  j["reference"] = ref;
  return j;
}

std::string RobustnessReport::table() const {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "model %s  T = %.6g ns  Omega_m = %.6g rad/ns  1-F(0) = %.3e\n", model.c_str(),
                duration, max_amplitude, 1.0 - noiseless_fidelity);
  os << buf;
  std::size_t nm = 0;
  for (const auto& a : axes) nm = std::max(nm, a.magnus.size());
  std::snprintf(buf, sizeof buf, "%-4s %14s %14s %14s %14s", "axis", "|r(T)| ns", "|r(T)|/T", "|R(T)| ns^2",
                "|R(T)|/T^2");
  os << buf;
  for (std::size_t n = 0; n < nm; ++n) {
    std::snprintf(buf, sizeof buf, " %14s", ("Abar_" + std::to_string(n + 1)).c_str());
    os << buf;
  }
  os << '\n';
  for (const auto& a : axes) {
    std::snprintf(buf, sizeof buf, "%-4c %14.6e %14.6e %14.6e %14.6e", axis_name(a.axis), a.error_distance,
                  a.error_distance / duration, a.net_area.norm(), a.net_area.norm() / (duration * duration));
    os << buf;
    for (double m : a.magnus) {
      std::snprintf(buf, sizeof buf, " %14.6e", m);
      os << buf;
    }
    os << '\n';
  }
  if (!reference.empty()) {
    std::snprintf(buf, sizeof buf, "%-4s %14s %14s\n", "axis", "delta/Omega_m", "1-F");
    os << buf;
    for (const auto& r : reference) {
      std::snprintf(buf, sizeof buf, "%-4c %14.4g %14.6e\n", axis_name(r.axis), r.relative_strength, 1.0 - r.fidelity);
      os << buf;
    }
  }
  return os.str();
}

RobustnessReport evaluate_robustness(const QubitModel& model, double max_amplitude, const ReportOptions& options) {
  RobustnessReport rep;
  rep.model = model.id;
  rep.duration = model.duration;
  rep.max_amplitude = max_amplitude;
  const Trajectory2 traj = model.noiseless_trajectory(options.steps);
  const Mat2 target = model.target;
  rep.noiseless_fidelity = gate_fidelity(traj.final_unitary(), target);
  for (Axis axis : options.axes) {
    const ErrorCurve c = error_curve(traj, axis);
    AxisRobustness a;
    a.axis = axis;
    a.error_distance = error_distance(c);
    a.net_area = net_area(c);
    if (options.magnus_order > 0) a.magnus = magnus_coefficients(c, options.magnus_order).rescaled;
    rep.axes.push_back(a);
    for (double rel : options.reference_strengths) {
      const double f = model.with_noise(NoiseSpec::along(axis, 0.5 * rel * max_amplitude)).fidelity(options.steps);
      rep.reference.push_back({axis, rel, f});
    }
  }
  return rep;
}

}  // namespace qeed
