#pragma once

// Analytic plane and space curves whose z-error pulses are robust by
// construction: closed curves (first order) and closed curves with zero net
// area (second order).

#include <optional>
#include <string>
#include <vector>

#include "qeed/curves.hpp"

namespace qeed {

// Lemniscate-like closed curve
//   x1 = alpha sin 2l / (3 + cos 2l),  y1 = 2 sin l / (3 + cos 2l).
JetVec lemniscate(Jet l, double alpha);
// Sinusoid x2 = alpha sin 2l, y2 = 2 l.
JetVec sinusoid(Jet l, double alpha);

enum class CompositeVariant {
  Plain,     // middle piece x1, y1
  Modified,  // middle piece x1, y1 (1 - 0.3 l (l - pi))
};

// Three-piece closed curve on [0, 2 pi]:
//   [0, pi/2)        (-beta x2(l), beta y2(l))
//   [pi/2, 3 pi/2)   (x1(l - pi/2), beta y2(pi/2) + y1(l - pi/2))
//   [3 pi/2, 2 pi]   (beta x2(2 pi - l), beta y2(2 pi - l))
// Its total curvature is 2 arctan(1/alpha).
ParametricCurve composite_curve(double alpha, double beta, CompositeVariant variant = CompositeVariant::Plain);

// beta giving zero net area for the composite curve, by Brent's method on
// [lo, hi]. Throws std::domain_error when the bracket has no sign change.
double solve_zero_area_beta(double alpha, CompositeVariant variant = CompositeVariant::Plain, double lo = 0.05,
                            double hi = 2.0);

struct CurveParams {
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> b;
  std::optional<double> radius;
};

struct LibraryCurve {
  ParametricCurve curve;
  double rotation_angle = 0.0;  // declared total curvature
  int order = 1;                // 1: closed, 2: closed with zero net area
  bool closed = true;
};

// Named constructors:
//   R1p_perp_3pi2, R1p_perp_7pi4, R1p_perp_pi, R1p_perp_2pi,
//   R2_perp_pi2, R2_perp_pi4, R2_perp_pi, R2_perp_2pi,
//   space_curve_c (example space curve), figure8_plane, figure8_space, circle.
// Throws std::invalid_argument for unknown names.
LibraryCurve curve_library(const std::string& name, const CurveParams& params = {});
std::vector<std::string> curve_library_names();
// The eight robust plane curves only.
std::vector<std::string> robust_curve_names();

// ((1 + cos(t/2)) cos(t/2), (1 - cos(t/2)) sin(t/2), (4/3) sin(3t/4)), t in [0, 4 pi].
ParametricCurve example_space_curve();
// (sin 2l, 3.5 sin l, 0) or (sin 2l, 3.5 sin l, 3.5 sin l), l in [0, 2 pi].
ParametricCurve figure8_curve(bool space);
ParametricCurve circle_curve(double radius);

// Closed forms for the example space curve in its own parameter t (unit speed).
double example_space_curvature(double t);
double example_space_torsion(double t);

}  // namespace qeed
