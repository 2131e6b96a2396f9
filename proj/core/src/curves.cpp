#include "qeed/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qeed {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGaussX = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                           0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussW = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

template <class F>
double gauss(double a, double b, F&& f) {
  const double m = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGaussX.size(); ++i) s += kGaussW[i] * f(m + h * kGaussX[i]);
  return s * h;
}

// Integral of f over the curve domain, split at breakpoints, `cells` cells per segment.
template <class F>
double integrate_segments(const ParametricCurve& c, int cells, F&& f) {
  double total = 0.0;
  for (std::size_t k = 0; k < c.segments().size(); ++k) {
    const auto& seg = c.segments()[k];
    const double h = (seg.hi - seg.lo) / cells;
    for (int i = 0; i < cells; ++i) {
      const double a = seg.lo + i * h, b = a + h;
      total += gauss(a, b, [&](double l) { return f(c.sample_in_segment(k, l)); });
    }
  }
  return total;
}

double wrap_pi(double x) { return std::remainder(x, 2.0 * kPi); }

// The value of x + 2 pi m closest to ref.
double nearest_2pi(double x, double ref) { return ref + wrap_pi(x - ref); }
// The value of x + pi m closest to ref.
double nearest_pi(double x, double ref) { return ref + std::remainder(x - ref, kPi); }

Vec3 e1_of(double psi) { return {-std::sin(psi), std::cos(psi), 0.0}; }
Vec3 e2_of(double psi, double theta) {
  return {std::cos(psi) * std::sin(theta), std::sin(psi) * std::sin(theta), -std::cos(theta)};
}

struct RawAngles {
  double psi;
  double theta;
  bool psi_defined;
};

RawAngles raw_tangent_angles(const Vec3& t) {
  RawAngles a;
  a.theta = std::asin(std::clamp(t.z(), -1.0, 1.0));
  a.psi_defined = std::hypot(t.x(), t.y()) > 1e-9;
  a.psi = a.psi_defined ? std::atan2(t.y(), t.x()) : 0.0;
  return a;
}

// Picks the representation (psi, theta) or (psi + pi, pi - theta), shifted by
// 2 pi multiples, nearest to the predicted values.
void choose_representation(const RawAngles& raw, double psi_pred, double theta_pred, double& psi, double& theta) {
  const double ta = nearest_2pi(raw.theta, theta_pred);
  const double tb = nearest_2pi(kPi - raw.theta, theta_pred);
  const double pa = nearest_2pi(raw.psi, psi_pred);
  const double pb = nearest_2pi(raw.psi + kPi, psi_pred);
  const double w = std::abs(std::cos(raw.theta));
  const double score_a = std::abs(ta - theta_pred) + (raw.psi_defined ? w * std::abs(pa - psi_pred) : 0.0);
  const double score_b = std::abs(tb - theta_pred) + (raw.psi_defined ? w * std::abs(pb - psi_pred) : 0.0);
  if (score_a <= score_b) {
    theta = ta;
    psi = raw.psi_defined ? pa : psi_pred;
  } else {
    theta = tb;
    psi = raw.psi_defined ? pb : psi_pred;
  }
}

// Projections of r'' on the two normal directions e1, e2.
std::pair<double, double> normal_projections(const CurveSample& c, double psi, double theta) {
  return {c.d2.dot(e1_of(psi)), c.d2.dot(e2_of(psi, theta))};
}

void interpolate_gaps(std::vector<double>& v, const std::vector<bool>& defined, const std::vector<double>& x) {
  const std::size_t n = v.size();
  std::size_t k = 0;
  while (k < n) {
    if (defined[k]) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j < n && !defined[j]) ++j;
    if (k == 0 && j == n) {
      std::fill(v.begin(), v.end(), 0.0);
      return;
    }
    for (std::size_t i = k; i < j; ++i) {
      if (k == 0) {
        v[i] = v[j];
      } else if (j == n) {
        v[i] = v[k - 1];
      } else {
        const double w = (x[i] - x[k - 1]) / (x[j] - x[k - 1]);
        v[i] = (1 - w) * v[k - 1] + w * v[j];
      }
    }
    k = j;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// ParametricCurve

ParametricCurve::ParametricCurve(std::string name, double lo, double hi, CurveFunction f)
    : ParametricCurve(std::move(name), std::vector<Segment>{{lo, hi, std::move(f)}}) {}

ParametricCurve::ParametricCurve(std::string name, std::vector<Segment> segments)
    : name_(std::move(name)), segments_(std::move(segments)) {
  if (segments_.empty()) throw std::invalid_argument("ParametricCurve: no segments");
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    if (!(s.hi > s.lo)) throw std::invalid_argument("ParametricCurve: empty parameter range");
    if (!s.f) throw std::invalid_argument("ParametricCurve: missing coordinate function");
    if (k > 0) {
      if (std::abs(segments_[k - 1].hi - s.lo) > 1e-12) {
        throw std::invalid_argument("ParametricCurve: segments are not contiguous");
      }
      const Vec3 left = sample_in_segment(k - 1, s.lo).r;
      const Vec3 right = sample_in_segment(k, s.lo).r;
      if ((left - right).norm() > 1e-9) {
        std::ostringstream os;
        os << "ParametricCurve '" << name_ << "': position jump " << (left - right).norm() << " at lambda = " << s.lo;
        throw std::invalid_argument(os.str());
      }
    }
  }
}

std::vector<double> ParametricCurve::breakpoints() const {
  std::vector<double> b;
  for (std::size_t k = 1; k < segments_.size(); ++k) b.push_back(segments_[k].lo);
  return b;
}

std::size_t ParametricCurve::segment_index(double lambda) const {
  std::size_t k = 0;
  while (k + 1 < segments_.size() && lambda >= segments_[k + 1].lo) ++k;
  return k;
}

CurveSample ParametricCurve::sample_in_segment(std::size_t segment, double lambda) const {
  const JetVec j = segments_[segment].f(Jet::variable(lambda));
  return {Vec3(j[0].v, j[1].v, j[2].v), Vec3(j[0].d, j[1].d, j[2].d), Vec3(j[0].dd, j[1].dd, j[2].dd)};
}

CurveSample ParametricCurve::sample(double lambda) const { return sample_in_segment(segment_index(lambda), lambda); }

bool ParametricCurve::planar() const {
  for (std::size_t k = 0; k < segments_.size(); ++k) {
    const auto& s = segments_[k];
    for (int i = 0; i <= 256; ++i) {
      const CurveSample c = sample_in_segment(k, s.lo + (s.hi - s.lo) * i / 256.0);
      if (std::abs(c.r.z()) > 1e-14 || std::abs(c.d1.z()) > 1e-14 || std::abs(c.d2.z()) > 1e-14) return false;
    }
  }
  return true;
}

ParametricCurve ParametricCurve::from_points(std::string name, const std::vector<Vec3>& points) {
  const std::size_t n = points.size();
  if (n < 3) throw std::invalid_argument("ParametricCurve::from_points: need at least three points");
  // Natural spline second derivatives on a unit grid (tridiagonal solve).
  std::vector<Vec3> m(n, Vec3::Zero());
  {
    std::vector<double> c(n, 0.0);
    std::vector<Vec3> d(n, Vec3::Zero());
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Vec3 rhs = 6.0 * (points[i + 1] - 2.0 * points[i] + points[i - 1]);
      const double denom = 4.0 - (i > 1 ? c[i - 1] : 0.0);
      c[i] = 1.0 / denom;
      d[i] = (rhs - (i > 1 ? d[i - 1] : Vec3::Zero())) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m[i] = d[i] - c[i] * m[i + 1];
      if (i == 1) break;
    }
  }
  auto pts = std::make_shared<std::vector<Vec3>>(points);
  auto mm = std::make_shared<std::vector<Vec3>>(std::move(m));
  CurveFunction f = [pts, mm](Jet t) {
    const std::size_t n = pts->size();
    std::size_t k = static_cast<std::size_t>(std::clamp(std::floor(t.v), 0.0, static_cast<double>(n - 2)));
    const Jet u = t - Jet(static_cast<double>(k));
    JetVec out;
    for (int a = 0; a < 3; ++a) {
      const double y0 = (*pts)[k][a], y1 = (*pts)[k + 1][a];
      const double m0 = (*mm)[k][a], m1 = (*mm)[k + 1][a];
      const double c1 = (y1 - y0) - (2 * m0 + m1) / 6.0;
      const Jet poly = Jet(y0) + u * (Jet(c1) + u * (Jet(m0 / 2.0) + u * Jet((m1 - m0) / 6.0)));
      out[static_cast<std::size_t>(a)] = poly;
    }
    return out;
  };
  return ParametricCurve(std::move(name), 0.0, static_cast<double>(n - 1), std::move(f));
}

NonRegularCurveError::NonRegularCurveError(const std::string& curve, double lambda)
    : std::invalid_argument([&] {
        std::ostringstream os;
        os << "curve '" << curve << "' is not regular: speed vanishes at lambda = " << lambda;
        return os.str();
      }()),
      lambda_(lambda) {}

// ---------------------------------------------------------------------------
// Arc length

ArcLength::ArcLength(const ParametricCurve& curve, int cells) : curve_(curve) {
  const double span = curve.upper() - curve.lower();
  for (std::size_t k = 0; k < curve.segments().size(); ++k) {
    const auto& seg = curve.segments()[k];
    const int nc = std::max(16, static_cast<int>(std::ceil(cells * (seg.hi - seg.lo) / span)));
    for (int i = 0; i < nc; ++i) {
      lambda_nodes_.push_back(seg.lo + (seg.hi - seg.lo) * i / nc);
      node_segment_.push_back(k);
    }
  }
  lambda_nodes_.push_back(curve.upper());

  // Regularity: probe speeds at cell nodes and quadrature points.
  double vmax = 0.0;
  std::vector<std::pair<double, double>> probes;
  for (std::size_t c = 0; c + 1 < lambda_nodes_.size(); ++c) {
    const double a = lambda_nodes_[c], b = lambda_nodes_[c + 1];
    const double m = 0.5 * (a + b), h = 0.5 * (b - a);
    probes.emplace_back(a, speed(node_segment_[c], a));
    for (double x : kGaussX) probes.emplace_back(m + h * x, speed(node_segment_[c], m + h * x));
  }
  for (const auto& [l, v] : probes) vmax = std::max(vmax, v);
  for (const auto& [l, v] : probes) {
    const bool endpoint = l <= curve.lower() || l >= curve.upper();
    if (!endpoint && v < 1e-10 * vmax) throw NonRegularCurveError(curve.name(), l);
  }

  s_nodes_.assign(lambda_nodes_.size(), 0.0);
  for (std::size_t c = 0; c + 1 < lambda_nodes_.size(); ++c) {
    s_nodes_[c + 1] = s_nodes_[c] + cell_integral(c, lambda_nodes_[c + 1]);
  }
}

double ArcLength::speed(std::size_t segment, double lambda) const {
  return curve_.sample_in_segment(segment, lambda).d1.norm();
}

double ArcLength::cell_integral(std::size_t cell, double upto) const {
  const double a = lambda_nodes_[cell];
  if (upto <= a) return 0.0;
  const std::size_t seg = node_segment_[cell];
  return gauss(a, upto, [&](double l) { return speed(seg, l); });
}

double ArcLength::s_of(double lambda) const {
  lambda = std::clamp(lambda, curve_.lower(), curve_.upper());
  auto it = std::upper_bound(lambda_nodes_.begin(), lambda_nodes_.end(), lambda);
  std::size_t cell = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - lambda_nodes_.begin() - 1));
  if (cell + 1 >= lambda_nodes_.size()) return length();
  return s_nodes_[cell] + cell_integral(cell, lambda);
}

double ArcLength::lambda_of(double s) const {
  const double total = length();
  if (s <= 0.0) return curve_.lower();
  if (s >= total) return curve_.upper();
  auto it = std::upper_bound(s_nodes_.begin(), s_nodes_.end(), s);
  const std::size_t cell = static_cast<std::size_t>(it - s_nodes_.begin() - 1);
  const double a = lambda_nodes_[cell], b = lambda_nodes_[cell + 1];
  const double sa = s_nodes_[cell], sb = s_nodes_[cell + 1];
  double l = a + (b - a) * (s - sa) / (sb - sa);
  for (int iter = 0; iter < 20; ++iter) {
    const double f = sa + cell_integral(cell, l) - s;
    const double v = speed(node_segment_[cell], l);
    if (std::abs(f) < 1e-15 * std::max(1.0, total) || v <= 0.0) break;
    const double next = std::clamp(l - f / v, a, b);
    if (next == l) break;
    l = next;
  }
  return l;
}

UnitSpeedCurve arc_length_reparam(const ParametricCurve& curve, int samples) {
  if (samples < 2) throw std::invalid_argument("arc_length_reparam: need at least two samples");
  const ArcLength arc(curve);
  UnitSpeedCurve out;
  out.length = arc.length();
  out.s.resize(static_cast<std::size_t>(samples));
  out.lambda.resize(out.s.size());
  out.points.resize(out.s.size());
  out.tangents.resize(out.s.size());
  for (int k = 0; k < samples; ++k) {
    const double s = out.length * k / (samples - 1);
    const double l = arc.lambda_of(s);
    const CurveSample c = curve.sample(l);
    out.s[static_cast<std::size_t>(k)] = s;
    out.lambda[static_cast<std::size_t>(k)] = l;
    out.points[static_cast<std::size_t>(k)] = c.r;
    out.tangents[static_cast<std::size_t>(k)] = c.d1.normalized();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Frenet angles

Vec3 tangent_from_angles(double psi, double theta) {
  return {std::cos(psi) * std::cos(theta), std::sin(psi) * std::cos(theta), std::sin(theta)};
}

Vec3 normal_from_angles(double psi, double theta, double phi) {
  return std::cos(phi) * e1_of(psi) + std::sin(phi) * e2_of(psi, theta);
}

Vec3 binormal_from_angles(double psi, double theta, double phi) {
  return std::sin(phi) * e1_of(psi) - std::cos(phi) * e2_of(psi, theta);
}

std::pair<double, double> tan_phi_ratio(const CurveSample& c) {
  const Vec3& p = c.d1;
  const Vec3& q = c.d2;
  const double num = -(q.z() * (p.x() * p.x() + p.y() * p.y()) - p.z() * (p.x() * q.x() + p.y() * q.y()));
  const double den = p.norm() * (q.y() * p.x() - q.x() * p.y());
  return {num, den};
}

namespace {

struct AngleSeries {
  std::vector<double> psi, theta, phi;
  std::vector<bool> phi_defined;
};

// Angles along the lambda samples, continuous in lambda.
AngleSeries angle_series(const ParametricCurve& curve, const std::vector<double>& lambdas, const std::vector<double>& s,
                         bool planar) {
  const std::size_t n = lambdas.size();
  AngleSeries a;
  a.psi.assign(n, 0.0);
  a.theta.assign(n, 0.0);
  a.phi.assign(n, 0.0);
  a.phi_defined.assign(n, true);

  std::vector<CurveSample> cs(n);
  std::vector<RawAngles> raw(n);
  for (std::size_t k = 0; k < n; ++k) {
    cs[k] = curve.sample(lambdas[k]);
    raw[k] = raw_tangent_angles(cs[k].d1.normalized());
  }

  if (planar) {
    std::vector<bool> defined(n);
    for (std::size_t k = 0; k < n; ++k) defined[k] = raw[k].psi_defined;
    double prev = 0.0;
    bool started = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (!defined[k]) continue;
      a.psi[k] = started ? nearest_2pi(raw[k].psi, prev) : raw[k].psi;
      prev = a.psi[k];
      started = true;
    }
    interpolate_gaps(a.psi, defined, s);
    return a;
  }

  // Start from the first sample with a well-defined psi, sweep both ways.
  std::size_t k0 = 0;
  while (k0 < n && std::abs(std::cos(raw[k0].theta)) < 1e-6) ++k0;
  if (k0 == n) k0 = 0;
  a.psi[k0] = raw[k0].psi;
  a.theta[k0] = raw[k0].theta;
  auto step = [&](std::size_t k, std::size_t prev, std::size_t prev2, bool have2) {
    const double tp = have2 ? 2 * a.theta[prev] - a.theta[prev2] : a.theta[prev];
    const double pp = have2 ? 2 * a.psi[prev] - a.psi[prev2] : a.psi[prev];
    choose_representation(raw[k], pp, tp, a.psi[k], a.theta[k]);
  };
  for (std::size_t k = k0 + 1; k < n; ++k) step(k, k - 1, k - 2, k >= k0 + 2);
  for (std::size_t k = k0; k-- > 0;) step(k, k + 1, k + 2, k + 2 < n);

  // phi from tan phi = (r''.e2)/(r''.e1), unwrapped by pi.
  double curvature_scale = 0.0;
  std::vector<std::pair<double, double>> proj(n);
  for (std::size_t k = 0; k < n; ++k) {
    proj[k] = normal_projections(cs[k], a.psi[k], a.theta[k]);
    curvature_scale = std::max(curvature_scale, std::hypot(proj[k].first, proj[k].second) / cs[k].d1.squaredNorm());
  }
  const double zero_tol = 1e-9 * std::max(curvature_scale, 1e-300);
  bool started = false;
  double prev = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const auto [p1, p2] = proj[k];
    if (std::hypot(p1, p2) / cs[k].d1.squaredNorm() <= zero_tol) {
      a.phi_defined[k] = false;
      continue;
    }
    double phi = std::atan(p2 / p1);
    if (p1 == 0.0) phi = kPi / 2.0;
    phi = started ? nearest_pi(phi, prev) : phi;
    a.phi[k] = phi;
    prev = phi;
    started = true;
  }
  interpolate_gaps(a.phi, a.phi_defined, s);
  // Branch: non-negative signed curvature at the first defined sample.
  for (std::size_t k = 0; k < n; ++k) {
    if (!a.phi_defined[k]) continue;
    const double kappa = cs[k].d2.dot(normal_from_angles(a.psi[k], a.theta[k], a.phi[k]));
    if (kappa < 0.0) {
      for (auto& v : a.phi) v += kPi;
    }
    break;
  }
  return a;
}

}  // namespace

FrenetAngles frenet_angles(const ArcLength& arc, int samples) {
  if (samples < 3) throw std::invalid_argument("frenet_angles: need at least three samples");
  FrenetAngles f;
  f.s.resize(static_cast<std::size_t>(samples));
  std::vector<double> lambdas(f.s.size());
  for (int k = 0; k < samples; ++k) {
    f.s[static_cast<std::size_t>(k)] = arc.length() * k / (samples - 1);
    lambdas[static_cast<std::size_t>(k)] = arc.lambda_of(f.s[static_cast<std::size_t>(k)]);
  }
  const AngleSeries a = angle_series(arc.curve(), lambdas, f.s, arc.curve().planar());
  f.psi = a.psi;
  f.theta = a.theta;
  f.phi = a.phi;
  return f;
}

FrenetAngles frenet_angles(const ParametricCurve& curve, int samples) {
  return frenet_angles(ArcLength(curve), samples);
}

double plane_curvature(const ParametricCurve& curve, double lambda) {
  const CurveSample c = curve.sample(lambda);
  const double v2 = c.d1.x() * c.d1.x() + c.d1.y() * c.d1.y();
  if (!(v2 > 0.0)) throw NonRegularCurveError(curve.name(), lambda);
  return (c.d1.x() * c.d2.y() - c.d1.y() * c.d2.x()) / std::pow(v2, 1.5);
}

std::vector<double> plane_curvature(const ParametricCurve& curve, const std::vector<double>& lambdas) {
  std::vector<double> out(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k) out[k] = plane_curvature(curve, lambdas[k]);
  return out;
}

double total_curvature(const ParametricCurve& curve) {
  if (curve.planar()) {
    return integrate_segments(curve, 512, [](const CurveSample& c) {
      const double v2 = c.d1.x() * c.d1.x() + c.d1.y() * c.d1.y();
      return v2 > 0.0 ? (c.d1.x() * c.d2.y() - c.d1.y() * c.d2.x()) / v2 : 0.0;
    });
  }
  const FrenetAngles a = frenet_angles(curve, 8001);
  const ArcLength arc(curve);
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k < a.s.size(); ++k) {
    const CurveSample c = curve.sample(arc.lambda_of(a.s[k]));
    const double kappa = c.d2.dot(normal_from_angles(a.psi[k], a.theta[k], a.phi[k])) / c.d1.squaredNorm();
    if (k > 0) total += 0.5 * (a.s[k] - a.s[k - 1]) * (kappa + prev);
    prev = kappa;
  }
  return total;
}

double plane_net_area(const ParametricCurve& curve) {
  return integrate_segments(curve, 512,
                            [](const CurveSample& c) { return c.d1.y() * c.r.x() - c.d1.x() * c.r.y(); });
}

// ---------------------------------------------------------------------------
// Curve -> pulse

std::vector<double> SynthesizedPulse::times() const {
  std::vector<double> t(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) t[k] = alpha * s[k];
  return t;
}

std::vector<double> SynthesizedPulse::amplitude_samples() const {
  std::vector<double> a(curvature.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = curvature[k] / alpha;
  return a;
}

SynthesizedPulse curve_to_pulse(const ParametricCurve& curve, double gate_time, double initial_phase, int samples) {
  if (!(gate_time > 0.0)) throw std::invalid_argument("curve_to_pulse: gate time must be positive");
  if (samples < 5) throw std::invalid_argument("curve_to_pulse: need at least five samples");
  auto arc = std::make_shared<ArcLength>(curve);
  SynthesizedPulse out;
  out.gate_time = gate_time;
  out.length = arc->length();
  out.alpha = gate_time / out.length;
  out.initial_phase = initial_phase;
  out.planar = curve.planar();

  const std::size_t n = static_cast<std::size_t>(samples);
  out.s.resize(n);
  std::vector<double> lambdas(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.s[k] = out.length * static_cast<double>(k) / static_cast<double>(n - 1);
    lambdas[k] = arc->lambda_of(out.s[k]);
  }
  const AngleSeries a = angle_series(curve, lambdas, out.s, out.planar);
  out.angles = {out.s, a.psi, a.theta, a.phi};
  out.curvature.resize(n);
  out.torsion.assign(n, 0.0);
  out.phase.assign(n, initial_phase);

  for (std::size_t k = 0; k < n; ++k) {
    const CurveSample c = curve.sample(lambdas[k]);
    out.curvature[k] = c.d2.dot(normal_from_angles(a.psi[k], a.theta[k], a.phi[k])) / c.d1.squaredNorm();
  }

  if (!out.planar) {
    // torsion = -B'.N / |r'| with B' by central differences in lambda.
    const double h = 1e-5 * (curve.upper() - curve.lower());
    auto binormal_at = [&](double l, std::size_t k) {
      const CurveSample c = curve.sample(l);
      const RawAngles raw = raw_tangent_angles(c.d1.normalized());
      double psi = 0.0, theta = 0.0;
      choose_representation(raw, a.psi[k], a.theta[k], psi, theta);
      const auto [p1, p2] = normal_projections(c, psi, theta);
      double phi = p1 == 0.0 ? kPi / 2.0 : std::atan(p2 / p1);
      phi = nearest_pi(phi, a.phi[k]);
      return binormal_from_angles(psi, theta, phi);
    };
    for (std::size_t k = 0; k < n; ++k) {
      const double l = lambdas[k];
      const auto seg = curve.segment_index(l);
      const double lo = curve.segments()[seg].lo, hi = curve.segments()[seg].hi;
      Vec3 dB;
      if (l - h >= lo && l + h <= hi) {
        dB = (binormal_at(l + h, k) - binormal_at(l - h, k)) / (2 * h);
      } else if (l + 2 * h <= hi) {
        dB = (-3.0 * binormal_at(l, k) + 4.0 * binormal_at(l + h, k) - binormal_at(l + 2 * h, k)) / (2 * h);
      } else {
        dB = (3.0 * binormal_at(l, k) - 4.0 * binormal_at(l - h, k) + binormal_at(l - 2 * h, k)) / (2 * h);
      }
      const CurveSample c = curve.sample(l);
      out.torsion[k] = -dB.dot(normal_from_angles(a.psi[k], a.theta[k], a.phi[k])) / c.d1.norm();
    }
    for (std::size_t k = 1; k < n; ++k) {
      out.phase[k] = out.phase[k - 1] + 0.5 * (out.s[k] - out.s[k - 1]) * (out.torsion[k] + out.torsion[k - 1]);
    }
  }

  const double alpha = out.alpha;
  if (out.planar) {
    out.total_rotation = total_curvature(curve);
    // Exact evaluation through the arc-length inverse.
    const ParametricCurve c = curve;
    auto amplitude = [arc, c, alpha](double t) {
      const double l = arc->lambda_of(t / alpha);
      const CurveSample cs = c.sample(l);
      const double v2 = cs.d1.x() * cs.d1.x() + cs.d1.y() * cs.d1.y();
      return (cs.d1.x() * cs.d2.y() - cs.d1.y() * cs.d2.x()) / std::pow(v2, 1.5) / alpha;
    };
    out.pulse = ControlPulse(gate_time, Waveform::function(amplitude), Waveform::constant(initial_phase));
  } else {
    double total = 0.0;
    for (std::size_t k = 1; k < n; ++k) total += 0.5 * (out.s[k] - out.s[k - 1]) * (out.curvature[k] + out.curvature[k - 1]);
    out.total_rotation = total;
    out.pulse = ControlPulse(gate_time, Waveform::sampled(out.amplitude_samples(), gate_time),
                             Waveform::sampled(out.phase, gate_time));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alignment

RigidTransform kabsch(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  if (from.size() != to.size() || from.empty()) throw std::invalid_argument("kabsch: point sets must match");
  Vec3 ca = Vec3::Zero(), cb = Vec3::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) {
    ca += from[i];
    cb += to[i];
  }
  ca /= static_cast<double>(from.size());
  cb /= static_cast<double>(to.size());
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (std::size_t i = 0; i < from.size(); ++i) h += (from[i] - ca) * (to[i] - cb).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0) d(2, 2) = -1.0;
  RigidTransform t;
  t.rotation = svd.matrixV() * d * svd.matrixU().transpose();
  t.translation = cb - t.rotation * ca;
  return t;
}

double hausdorff_distance(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  auto directed = [](const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
    double worst = 0.0;
    for (const auto& x : p) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : q) best = std::min(best, (x - y).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(a, b), directed(b, a));
}

double diameter(const std::vector<Vec3>& points) {
  double d = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) d = std::max(d, (points[i] - points[j]).squaredNorm());
  }
  return std::sqrt(d);
}

}  // namespace qeed
