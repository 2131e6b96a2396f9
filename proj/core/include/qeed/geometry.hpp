#pragma once

// Error curves and Frenet frames of a noiseless two-level evolution U0(t).
//
// For noise V = delta sj the interaction-picture operator U0^dag sj U0 = Tj.s
// defines the unit tangent Tj(t) of the j-error curve r^j(t) = \int_0^t Tj.

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "qeed/model.hpp"
#include "qeed/pulse.hpp"
#include "qeed/su2.hpp"

namespace qeed {

// Tangent norm drifted from 1: the evolution left the two-level subspace.
class LeakageError : public std::runtime_error {
 public:
  explicit LeakageError(double max_deviation);
  double max_deviation() const { return max_deviation_; }

 private:
  double max_deviation_;
};

inline constexpr double kTangentTolerance = 1e-8;

struct ErrorCurve {
  Axis axis = Axis::Z;
  std::vector<double> times;
  std::vector<Vec3> points;
  std::vector<Vec3> tangents;

  std::size_t size() const { return times.size(); }
  const Vec3& endpoint() const { return points.back(); }
  double duration() const { return times.back(); }
  // Trapezoidal arc length up to sample k (all samples when k is npos).
  double arc_length(std::size_t k = static_cast<std::size_t>(-1)) const;
};

ErrorCurve error_curve(const Trajectory2& traj, Axis axis);
// Two-level block `subspace` of a multi-level trajectory.
ErrorCurve error_curve(const TrajectoryN& traj, const std::vector<int>& subspace, Axis axis);

enum class Orientation { AsDefined, Flipped };

struct FrenetFrameSeries {
  Axis axis = Axis::Z;
  std::vector<double> times;
  std::vector<Vec3> T;
  std::vector<Vec3> N;
  std::vector<Vec3> B;
};

// Frame from operator conjugations. For the z axis
//   T.s = U0^dag sz U0, N.s = U0^dag (-sin Phi sx + cos Phi sy) U0,
//   B.s = U0^dag (-cos Phi sx - sin Phi sy) U0,
// which gives kappa = Omega and torsion = dPhi/dt. The x frame is
//   T.s = U0^dag sx U0, N.s = -U0^dag sz U0, B.s = U0^dag sy U0
// and the y frame T.s = U0^dag sy U0, N.s = -U0^dag sz U0, B.s = -U0^dag sx U0.
//
// Throws std::invalid_argument when the pulse does not match the trajectory
// (sup |dT/dt - kappa N| above `tolerance` times max(1, max|Omega|)).
FrenetFrameSeries frenet_frame(const Trajectory2& traj, const ControlPulse& pulse, Axis axis = Axis::Z,
                               Orientation orientation = Orientation::AsDefined, double tolerance = 1e-3);

// Curvature and torsion implied by the generating pulse on the frame's axis.
// z: (Omega, dPhi/dt); x: (-Omega sin Phi, -Omega cos Phi); y: (Omega cos Phi, -Omega sin Phi).
std::pair<double, double> expected_curvature_torsion(const ControlPulse& pulse, Axis axis, double t);

struct CurvatureTorsion {
  std::vector<double> times;
  std::vector<double> curvature;
  std::vector<double> torsion;
};

// kappa = T'.N and torsion = -B'.N by central differences (second-order
// one-sided stencils at the ends).
CurvatureTorsion extract_curvature_torsion(const FrenetFrameSeries& frame);

// Sup-norm residuals of the Frenet-Serret system on the sampled frame.
struct FrenetSerretResidual {
  double tangent = 0.0;   // |T' - k N|
  double normal = 0.0;    // |N' + k T - t B|
  double binormal = 0.0;  // |B' + t N|
};
FrenetSerretResidual frenet_serret_residual(const FrenetFrameSeries& frame, const CurvatureTorsion& ct);

// Derivative of sampled vectors on a (not necessarily uniform) grid.
std::vector<Vec3> differentiate(const std::vector<double>& t, const std::vector<Vec3>& v);
std::vector<double> differentiate(const std::vector<double>& t, const std::vector<double>& v);

struct Qeed {
  std::vector<double> times;
  std::map<Axis, ErrorCurve> curves;

  const ErrorCurve& at(Axis axis) const { return curves.at(axis); }
  // {"times": [...], "curves": {"z": [[x, y, z], ...], ...}}; `stride` subsamples.
  nlohmann::json to_json(std::size_t stride = 1) const;
};

Qeed build_qeed(const Trajectory2& noiseless, const std::set<Axis>& axes);
Qeed build_qeed(const QubitModel& model, const std::set<Axis>& axes, int steps = 0);

}  // namespace qeed
