#include "qeed/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qeed {

namespace {

std::string leakage_message(double d) {
  std::ostringstream os;
  os << "error curve tangent is not unit length (max deviation " << d << "); the evolution leaks out of the subspace";
  return os.str();
}

ErrorCurve integrate_tangents(Axis axis, std::vector<double> times, std::vector<Vec3> tangents) {
  double worst = 0.0;
  for (const auto& t : tangents) worst = std::max(worst, std::abs(t.norm() - 1.0));
  if (worst > kTangentTolerance) throw LeakageError(worst);
  ErrorCurve c;
  c.axis = axis;
  c.points.resize(tangents.size());
  c.points[0] = Vec3::Zero();
  for (std::size_t k = 1; k < tangents.size(); ++k) {
    c.points[k] = c.points[k - 1] + 0.5 * (times[k] - times[k - 1]) * (tangents[k] + tangents[k - 1]);
  }
  c.times = std::move(times);
  c.tangents = std::move(tangents);
  return c;
}

template <class T>
std::vector<T> diff_impl(const std::vector<double>& t, const std::vector<T>& v, T zero) {
  const std::size_t n = v.size();
  std::vector<T> d(n, zero);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (v[1] - v[0]) / (t[1] - t[0]);
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double h0 = t[k] - t[k - 1], h1 = t[k + 1] - t[k];
    d[k] = (-h1 / (h0 * (h0 + h1))) * v[k - 1] + ((h1 - h0) / (h0 * h1)) * v[k] + (h0 / (h1 * (h0 + h1))) * v[k + 1];
  }
  {
    const double h0 = t[1] - t[0], h1 = t[2] - t[1];
    d[0] = (-(2 * h0 + h1) / (h0 * (h0 + h1))) * v[0] + ((h0 + h1) / (h0 * h1)) * v[1] - (h0 / (h1 * (h0 + h1))) * v[2];
  }
  {
    const double h0 = t[n - 2] - t[n - 3], h1 = t[n - 1] - t[n - 2];
    d[n - 1] = (h1 / (h0 * (h0 + h1))) * v[n - 3] - ((h0 + h1) / (h0 * h1)) * v[n - 2] +
               ((2 * h1 + h0) / (h1 * (h0 + h1))) * v[n - 1];
  }
  return d;
}

// Frame axes (in the lab frame) before conjugation, given Phi.
void frame_operators(Axis axis, double phi, Vec3& t, Vec3& n, Vec3& b) {
  const double c = std::cos(phi), s = std::sin(phi);
  switch (axis) {
    case Axis::Z:
      t = Vec3(0, 0, 1);
      n = Vec3(-s, c, 0);
      b = Vec3(-c, -s, 0);
      return;
    case Axis::X:
      t = Vec3(1, 0, 0);
      n = Vec3(0, 0, -1);
      b = Vec3(0, 1, 0);
      return;
    case Axis::Y:
      t = Vec3(0, 1, 0);
      n = Vec3(0, 0, -1);
      b = Vec3(-1, 0, 0);
      return;
  }
}

// Rows of the SO(3) image: U^dag (v.s) U = (R^T v).s with R_jk = conj_axis(j)_k.
Eigen::Matrix3d adjoint_rotation(const Mat2& u) {
  Eigen::Matrix3d r;
  for (int j = 0; j < 3; ++j) r.row(j) = conjugated_axis(u, static_cast<Axis>(j)).transpose();
  return r;
}

}  // namespace

LeakageError::LeakageError(double max_deviation)
    : std::runtime_error(leakage_message(max_deviation)), max_deviation_(max_deviation) {}

double ErrorCurve::arc_length(std::size_t k) const {
  const std::size_t end = std::min(k, times.size() - 1);
  double s = 0.0;
  for (std::size_t i = 1; i <= end; ++i) {
    s += 0.5 * (times[i] - times[i - 1]) * (tangents[i].norm() + tangents[i - 1].norm());
  }
  return s;
}

ErrorCurve error_curve(const Trajectory2& traj, Axis axis) {
  std::vector<Vec3> tangents(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) tangents[k] = conjugated_axis(traj.unitaries[k], axis);
  return integrate_tangents(axis, traj.times, std::move(tangents));
}

ErrorCurve error_curve(const TrajectoryN& traj, const std::vector<int>& subspace, Axis axis) {
  if (subspace.size() != 2) throw std::invalid_argument("error_curve: subspace must have exactly two levels");
  std::vector<Vec3> tangents(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const MatN& u = traj.unitaries[k];
    Mat2 block;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) block(i, j) = u(subspace[i], subspace[j]);
    }
    tangents[k] = conjugated_axis(block, axis);
  }
  return integrate_tangents(axis, traj.times, std::move(tangents));
}

std::pair<double, double> expected_curvature_torsion(const ControlPulse& pulse, Axis axis, double t) {
  double omega = 0.0, phi = 0.0, phi_rate = 0.0;
  if (pulse.scheme() == DriveScheme::AmplitudePhase) {
    omega = pulse.amplitude(t);
    phi = pulse.phase(t);
    phi_rate = pulse.phase_rate(t);
  } else {
    omega = std::hypot(pulse.in_phase(t), pulse.quadrature(t));
    phi = pulse.phase(t);
    phi_rate = pulse.phase_rate(t);
  }
  switch (axis) {
    case Axis::Z:
      return {omega, phi_rate};
    case Axis::X:
      return {-omega * std::sin(phi), -omega * std::cos(phi)};
    default:
      return {omega * std::cos(phi), -omega * std::sin(phi)};
  }
}

FrenetFrameSeries frenet_frame(const Trajectory2& traj, const ControlPulse& pulse, Axis axis,
                               Orientation orientation, double tolerance) {
  FrenetFrameSeries f;
  f.axis = axis;
  f.times = traj.times;
  const std::size_t n = traj.size();
  f.T.resize(n);
  f.N.resize(n);
  f.B.resize(n);
  const double sign = orientation == Orientation::Flipped ? -1.0 : 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Eigen::Matrix3d r = adjoint_rotation(traj.unitaries[k]);
    Vec3 t, nn, b;
    frame_operators(axis, pulse.phase(f.times[k]), t, nn, b);
    f.T[k] = r.transpose() * t;
    f.N[k] = sign * (r.transpose() * nn);
    f.B[k] = sign * (r.transpose() * b);
  }
  // Consistency of pulse and trajectory: T' = kappa N.
  const auto dT = differentiate(f.times, f.T);
  double worst = 0.0, scale = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double kappa = sign * expected_curvature_torsion(pulse, axis, f.times[k]).first;
    scale = std::max(scale, std::abs(kappa));
    worst = std::max(worst, (dT[k] - kappa * f.N[k]).norm());
  }
  if (worst > tolerance * scale) {
    std::ostringstream os;
    os << "frenet_frame: pulse does not match trajectory (sup |T' - kappa N| = " << worst << ")";
    throw std::invalid_argument(os.str());
  }
  return f;
}

std::vector<Vec3> differentiate(const std::vector<double>& t, const std::vector<Vec3>& v) {
  return diff_impl<Vec3>(t, v, Vec3::Zero());
}

std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& v) {
  return diff_impl<double>(t, v, 0.0);
}

CurvatureTorsion extract_curvature_torsion(const FrenetFrameSeries& frame) {
  const auto dT = differentiate(frame.times, frame.T);
  const auto dB = differentiate(frame.times, frame.B);
  CurvatureTorsion ct;
  ct.times = frame.times;
  ct.curvature.resize(frame.times.size());
  ct.torsion.resize(frame.times.size());
  for (std::size_t k = 0; k < frame.times.size(); ++k) {
    ct.curvature[k] = dT[k].dot(frame.N[k]);
    ct.torsion[k] = -dB[k].dot(frame.N[k]);
  }
  return ct;
}

FrenetSerretResidual frenet_serret_residual(const FrenetFrameSeries& f, const CurvatureTorsion& ct) {
  const auto dT = differentiate(f.times, f.T);
  const auto dN = differentiate(f.times, f.N);
  const auto dB = differentiate(f.times, f.B);
  FrenetSerretResidual r;
  for (std::size_t k = 0; k < f.times.size(); ++k) {
    const double kap = ct.curvature[k], tor = ct.torsion[k];
    r.tangent = std::max(r.tangent, (dT[k] - kap * f.N[k]).norm());
    r.normal = std::max(r.normal, (dN[k] + kap * f.T[k] - tor * f.B[k]).norm());
    r.binormal = std::max(r.binormal, (dB[k] + tor * f.N[k]).norm());
  }
  return r;
}

nlohmann::json Qeed::to_json(std::size_t stride) const {
  stride = std::max<std::size_t>(stride, 1);
  nlohmann::json j;
  std::vector<double> t;
  for (std::size_t k = 0; k < times.size(); k += stride) t.push_back(times[k]);
  if ((times.size() - 1) % stride != 0) t.push_back(times.back());
  j["times"] = t;
  nlohmann::json curves_json = nlohmann::json::object();
  for (const auto& [axis, curve] : curves) {
    nlohmann::json pts = nlohmann::json::array();
    auto push = [&](std::size_t k) {
      const Vec3& p = curve.points[k];
      pts.push_back({p.x(), p.y(), p.z()});
    };
    for (std::size_t k = 0; k < curve.size(); k += stride) push(k);
    if ((curve.size() - 1) % stride != 0) push(curve.size() - 1);
    curves_json[std::string(1, axis_name(axis))] = pts;
  }
  j["curves"] = curves_json;
  return j;
}

Qeed build_qeed(const Trajectory2& noiseless, const std::set<Axis>& axes) {
  Qeed q;
  q.times = noiseless.times;
  for (Axis a : axes) q.curves.emplace(a, error_curve(noiseless, a));
  return q;
}

Qeed build_qeed(const QubitModel& model, const std::set<Axis>& axes, int steps) {
  return build_qeed(model.noiseless_trajectory(steps), axes);
}

}  // namespace qeed
