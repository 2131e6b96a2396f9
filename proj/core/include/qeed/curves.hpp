#pragma once

// Parametric space curves and their conversion into control pulses.
//
// A regular curve r(lambda) is reparametrized by arc length s; its continuous
// Frenet frame is written with three angles (psi, theta, phi):
//   T = (cos psi cos theta, sin psi cos theta, sin theta)
//   N = cos phi e1 + sin phi e2,  e1 = (-sin psi, cos psi, 0),
//       e2 = (cos psi sin theta, sin psi sin theta, -cos theta)
//   B = T x N
// and the signed curvature and torsion become the pulse amplitude and phase
// rate of the z-error correspondence.

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qeed/pulse.hpp"
#include "qeed/su2.hpp"

namespace qeed {

// Second-order forward-mode jet: value and first two derivatives.
struct Jet {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: implicit constants are convenient
  Jet(double value, double d1, double d2) : v(value), d(d1), dd(d2) {}
  static Jet variable(double x) { return {x, 1.0, 0.0}; }
};

inline Jet operator+(Jet a, Jet b) { return {a.v + b.v, a.d + b.d, a.dd + b.dd}; }
inline Jet operator-(Jet a, Jet b) { return {a.v - b.v, a.d - b.d, a.dd - b.dd}; }
inline Jet operator-(Jet a) { return {-a.v, -a.d, -a.dd}; }
inline Jet operator*(Jet a, Jet b) { return {a.v * b.v, a.d * b.v + a.v * b.d, a.dd * b.v + 2 * a.d * b.d + a.v * b.dd}; }
inline Jet operator/(Jet a, Jet b) {
  const double q = a.v / b.v;
  const double qd = (a.d - q * b.d) / b.v;
  const double qdd = (a.dd - 2 * qd * b.d - q * b.dd) / b.v;
  return {q, qd, qdd};
}
inline Jet sin(Jet a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return {s, c * a.d, c * a.dd - s * a.d * a.d};
}
inline Jet cos(Jet a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return {c, -s * a.d, -s * a.dd - c * a.d * a.d};
}
inline Jet sqrt(Jet a) {
  const double r = std::sqrt(a.v);
  return {r, a.d / (2 * r), a.dd / (2 * r) - a.d * a.d / (4 * r * a.v)};
}

using JetVec = std::array<Jet, 3>;
using CurveFunction = std::function<JetVec(Jet)>;

// r, r' and r'' at one parameter value.
struct CurveSample {
  Vec3 r;
  Vec3 d1;
  Vec3 d2;
};

class ParametricCurve {
 public:
  struct Segment {
    double lo;
    double hi;
    CurveFunction f;
  };

  ParametricCurve() = default;
  ParametricCurve(std::string name, double lo, double hi, CurveFunction f);
  // Piecewise curve; segments must be contiguous and positionally continuous
  // at the joins (1e-9), else std::invalid_argument.
  ParametricCurve(std::string name, std::vector<Segment> segments);

  // Natural cubic spline through points on a uniform parameter grid [0, n-1].
  static ParametricCurve from_points(std::string name, const std::vector<Vec3>& points);

  const std::string& name() const { return name_; }
  double lower() const { return segments_.front().lo; }
  double upper() const { return segments_.back().hi; }
  // Interior segment boundaries.
  std::vector<double> breakpoints() const;
  const std::vector<Segment>& segments() const { return segments_; }

  // Derivatives at a breakpoint are taken from the segment to the right,
  // except at the upper end.
  CurveSample sample(double lambda) const;
  CurveSample sample_in_segment(std::size_t segment, double lambda) const;
  Vec3 point(double lambda) const { return sample(lambda).r; }
  std::size_t segment_index(double lambda) const;

  // z, z', z'' vanish on a dense probe grid.
  bool planar() const;

 private:
  std::string name_;
  std::vector<Segment> segments_;
};

// Non-regular curve (vanishing speed inside the domain).
class NonRegularCurveError : public std::invalid_argument {
 public:
  NonRegularCurveError(const std::string& curve, double lambda);
  double lambda() const { return lambda_; }

 private:
  double lambda_;
};

// Arc length s(lambda) by per-cell Gauss-Legendre quadrature; the inverse
// lambda(s) by bracketing plus Newton on the quadrature.
class ArcLength {
 public:
  explicit ArcLength(const ParametricCurve& curve, int cells = 2048);

  double length() const { return s_nodes_.back(); }
  double s_of(double lambda) const;
  double lambda_of(double s) const;
  const ParametricCurve& curve() const { return curve_; }

 private:
  double cell_integral(std::size_t cell, double upto) const;
  double speed(std::size_t segment, double lambda) const;

  ParametricCurve curve_;
  std::vector<double> lambda_nodes_;
  std::vector<std::size_t> node_segment_;  // segment of cell k
  std::vector<double> s_nodes_;
};

struct UnitSpeedCurve {
  std::vector<double> s;
  std::vector<double> lambda;
  std::vector<Vec3> points;
  std::vector<Vec3> tangents;  // dr/ds
  double length = 0.0;
};

// Samples equally spaced in arc length, both ends included.
UnitSpeedCurve arc_length_reparam(const ParametricCurve& curve, int samples);

struct FrenetAngles {
  std::vector<double> s;
  std::vector<double> psi;
  std::vector<double> theta;
  std::vector<double> phi;
};

Vec3 tangent_from_angles(double psi, double theta);
Vec3 normal_from_angles(double psi, double theta, double phi);
Vec3 binormal_from_angles(double psi, double theta, double phi);

// tan phi of the frame angles:
//   -(z''(x'^2+y'^2) - z'(x'x''+y'y'')) / (|r'| (y''x' - x''y')).
// Returns {numerator, denominator}.
std::pair<double, double> tan_phi_ratio(const CurveSample& c);

// Angles on a uniform arc-length grid of `samples` points, continuous
// (unwrapped) along the curve. Planar curves get theta = phi = 0. Where the
// phi ratio is 0/0 the angle is interpolated from its neighbours. The phi
// branch is fixed so the signed curvature is non-negative at the first
// sample with non-zero curvature.
FrenetAngles frenet_angles(const ParametricCurve& curve, int samples);
FrenetAngles frenet_angles(const ArcLength& arc, int samples);

// Signed plane curvature (x'y'' - y'x'') / (x'^2 + y'^2)^(3/2).
double plane_curvature(const ParametricCurve& curve, double lambda);
std::vector<double> plane_curvature(const ParametricCurve& curve, const std::vector<double>& lambdas);

// \int kappa ds; for plane curves by quadrature of the winding rate.
double total_curvature(const ParametricCurve& curve);
// \int (y' x - x' y) dlambda (twice the signed enclosed area for closed curves).
double plane_net_area(const ParametricCurve& curve);

struct SynthesizedPulse {
  ControlPulse pulse;
  double gate_time = 0.0;
  double length = 0.0;     // curve length L
  double alpha = 1.0;      // gate_time / L
  double total_rotation = 0.0;
  double initial_phase = 0.0;
  bool planar = false;
  // On the uniform arc-length grid (curve units).
  std::vector<double> s;
  std::vector<double> curvature;
  std::vector<double> torsion;
  std::vector<double> phase;
  FrenetAngles angles;

  // Amplitude and phase on the uniform time grid matching `s`.
  std::vector<double> amplitude_samples() const;
  std::vector<double> times() const;
};

// Curve -> pulse: Omega(t) = kappa(t/alpha)/alpha, Phi(t) = Phi0 + \int_0^{t/alpha} torsion ds.
SynthesizedPulse curve_to_pulse(const ParametricCurve& curve, double gate_time, double initial_phase = 0.0,
                                int samples = 4001);

struct RigidTransform {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Vec3 translation = Vec3::Zero();
  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

// Proper rotation + translation minimizing sum |R from_i + t - to_i|^2.
RigidTransform kabsch(const std::vector<Vec3>& from, const std::vector<Vec3>& to);
double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b);
// Largest pairwise distance (for relative tolerances).
double diameter(const std::vector<Vec3>& points);

}  // namespace qeed
