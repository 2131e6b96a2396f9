#include "qeed/curve_library.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qeed {

namespace {

constexpr double kPi = std::numbers::pi;

JetVec planar(Jet x, Jet y) { return {x, y, Jet(0.0)}; }

}  // namespace

JetVec lemniscate(Jet l, double alpha) {
  const Jet den = Jet(3.0) + cos(Jet(2.0) * l);
  return planar(Jet(alpha) * sin(Jet(2.0) * l) / den, Jet(2.0) * sin(l) / den);
}

JetVec sinusoid(Jet l, double alpha) { return planar(Jet(alpha) * sin(Jet(2.0) * l), Jet(2.0) * l); }

ParametricCurve composite_curve(double alpha, double beta, CompositeVariant variant) {
  const bool modified = variant == CompositeVariant::Modified;
  std::vector<ParametricCurve::Segment> segs;
  segs.push_back({0.0, kPi / 2, [alpha, beta](Jet l) {
                    const JetVec s = sinusoid(l, alpha);
                    return planar(Jet(-beta) * s[0], Jet(beta) * s[1]);
                  }});
  segs.push_back({kPi / 2, 3 * kPi / 2, [alpha, beta, modified](Jet l) {
                    const Jet u = l - Jet(kPi / 2);
                    const JetVec m = lemniscate(u, alpha);
                    Jet y = m[1];
                    if (modified) y = y * (Jet(-0.3) * u * (u - Jet(kPi)) + Jet(1.0));
                    return planar(m[0], Jet(beta * kPi) + y);
                  }});
  segs.push_back({3 * kPi / 2, 2 * kPi, [alpha, beta](Jet l) {
                    const JetVec s = sinusoid(Jet(2 * kPi) - l, alpha);
                    return planar(Jet(beta) * s[0], Jet(beta) * s[1]);
                  }});
  std::ostringstream name;
  name << "composite(alpha=" << alpha << ", beta=" << beta << (modified ? ", modified)" : ")");
  return ParametricCurve(name.str(), std::move(segs));
}

double solve_zero_area_beta(double alpha, CompositeVariant variant, double lo, double hi) {
  if (!(alpha > 0.0)) throw std::invalid_argument("solve_zero_area_beta: alpha must be positive");
  auto f = [&](double beta) { return plane_net_area(composite_curve(alpha, beta, variant)); };
  double a = lo, b = hi, fa = f(a), fb = f(b);
  if (fa * fb > 0.0) {
    std::ostringstream os;
    os << "solve_zero_area_beta: net area has the same sign at beta = " << lo << " and " << hi
       << "; widen the bracket";
    throw std::domain_error(os.str());
  }
  // Brent's method.
  double c = a, fc = fa, d = b - a, e = d;
  for (int iter = 0; iter < 200; ++iter) {
    if (fb * fc > 0.0) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 1e-15;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) break;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
    fb = f(b);
  }
  if (std::abs(fb) > 1e-8) {
    std::ostringstream os;
    os << "solve_zero_area_beta: residual " << fb << " above 1e-8";
    throw std::runtime_error(os.str());
  }
  return b;
}

ParametricCurve example_space_curve() {
  return ParametricCurve("space_curve_c", 0.0, 4 * kPi, [](Jet t) {
    const Jet h = Jet(0.5) * t;
    const Jet c = cos(h);
    return JetVec{(Jet(1.0) + c) * c, (Jet(1.0) - c) * sin(h), Jet(4.0 / 3.0) * sin(Jet(0.75) * t)};
  });
}

double example_space_curvature(double t) { return std::sqrt(38.0 - 2.0 * std::cos(1.5 * t)) / 8.0; }

double example_space_torsion(double t) {
  return (-73.0 * std::cos(0.75 * t) + std::cos(2.25 * t)) / (-152.0 + 8.0 * std::cos(1.5 * t));
}

ParametricCurve figure8_curve(bool space) {
  return ParametricCurve(space ? "figure8_space" : "figure8_plane", 0.0, 2 * kPi, [space](Jet l) {
    const Jet y = Jet(3.5) * sin(l);
    return JetVec{sin(Jet(2.0) * l), y, space ? y : Jet(0.0)};
  });
}

ParametricCurve circle_curve(double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("circle: radius must be positive");
  return ParametricCurve("circle", 0.0, 2 * kPi,
                         [radius](Jet l) { return planar(Jet(radius) * cos(l), Jet(radius) * sin(l)); });
}

std::vector<std::string> robust_curve_names() {
  return {"R1p_perp_3pi2", "R1p_perp_7pi4", "R1p_perp_pi", "R1p_perp_2pi",
          "R2_perp_pi2",   "R2_perp_pi4",   "R2_perp_pi",  "R2_perp_2pi"};
}

std::vector<std::string> curve_library_names() {
  auto names = robust_curve_names();
  for (const char* n : {"space_curve_c", "figure8_plane", "figure8_space", "circle"}) names.emplace_back(n);
  return names;
}

LibraryCurve curve_library(const std::string& name, const CurveParams& p) {
  const double cot_pi8 = 2.4142135623730951;
  if (name == "R1p_perp_3pi2") {
    const double alpha = p.alpha.value_or(1.0);
    return {ParametricCurve(name, 0.0, kPi, [alpha](Jet l) { return lemniscate(l, alpha); }),
            2 * kPi - 2 * std::atan(1.0 / alpha), 1, true};
  }
  if (name == "R1p_perp_7pi4") {
    const double alpha = p.alpha.value_or(cot_pi8);
    return {ParametricCurve(name, 0.0, kPi,
                            [alpha](Jet l) {
                              const JetVec m = lemniscate(l, alpha);
                              return planar(m[0], m[1] * (Jet(-0.3) * l * (l - Jet(kPi)) + Jet(1.0)));
                            }),
            2 * kPi - 2 * std::atan(1.0 / alpha), 1, true};
  }
  if (name == "R1p_perp_pi") {
    const double alpha = p.alpha.value_or(0.72);
    return {ParametricCurve(name, 0.0, kPi,
                            [alpha](Jet l) {
                              const JetVec m = lemniscate(l, alpha);
                              const Jet s = sin(l);
                              return planar(m[0] * s * s, m[1]);
                            }),
            kPi, 1, true};
  }
  if (name == "R1p_perp_2pi") {
    return {ParametricCurve(name, 0.0, kPi,
                            [](Jet l) {
                              const Jet w = Jet(2.0) * l + Jet(kPi);
                              const Jet den = Jet(2.0) + cos(Jet(2.0) * l);
                              return planar(Jet(2.4) * sin(w) / den, (cos(w) + Jet(1.0)) / den * sin(l + Jet(kPi)));
                            }),
            2 * kPi, 1, true};
  }
  if (name == "R2_perp_pi2") {
    const double alpha = p.alpha.value_or(1.0);
    const double beta = p.beta ? *p.beta : solve_zero_area_beta(alpha, CompositeVariant::Plain);
    return {composite_curve(alpha, beta, CompositeVariant::Plain), 2 * std::atan(1.0 / alpha), 2, true};
  }
  if (name == "R2_perp_pi4") {
    const double alpha = p.alpha.value_or(cot_pi8);
    const double beta = p.beta ? *p.beta : solve_zero_area_beta(alpha, CompositeVariant::Modified);
    return {composite_curve(alpha, beta, CompositeVariant::Modified), 2 * std::atan(1.0 / alpha), 2, true};
  }
  if (name == "R2_perp_pi") {
    const double alpha = p.alpha.value_or(-0.3);
    const double b = p.b.value_or(0.6100818);
    return {ParametricCurve(name, 0.0, kPi,
                            [alpha, b](Jet l) {
                              const JetVec m = lemniscate(l, alpha);
                              const Jet s = sin(l);
                              const Jet x = m[0] * s * s * (l - Jet(kPi / 2 - b)) * (l - Jet(kPi / 2 + b));
                              return planar(x, Jet(0.25) * m[1]);
                            }),
            kPi, 2, true};
  }
  if (name == "R2_perp_2pi") {
    const double alpha = p.alpha.value_or(1.0);
    // Total curvature 0: a 2 pi rotation up to the global phase.
    return {ParametricCurve(name, 0.0, 2 * kPi, [alpha](Jet l) { return lemniscate(l, alpha); }), 0.0, 2, true};
  }
  if (name == "space_curve_c") return {example_space_curve(), 0.0, 1, true};
  if (name == "figure8_plane") return {figure8_curve(false), 0.0, 1, true};
  if (name == "figure8_space") return {figure8_curve(true), 0.0, 1, true};
  if (name == "circle") return {circle_curve(p.radius.value_or(1.0)), 2 * kPi, 1, true};
  throw std::invalid_argument("unknown curve '" + name + "'");
}

}  // namespace qeed
