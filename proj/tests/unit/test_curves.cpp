#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qeed/curve_library.hpp"
#include "qeed/curves.hpp"

using namespace qeed;

namespace {
constexpr double kPi = 3.141592653589793;

ParametricCurve helix(double a, double b) {
  return ParametricCurve("helix", 0.0, 4 * kPi, [a, b](Jet l) {
    return JetVec{Jet(a) * cos(l), Jet(a) * sin(l), Jet(b) * l};
  });
}
}  // namespace

TEST(JetTest, ChainRule) {
  const Jet x = Jet::variable(0.7);
  const Jet f = sin(x * x) / (Jet(2.0) + cos(x));
  const double h = 1e-4;
  auto g = [](double v) { return std::sin(v * v) / (2.0 + std::cos(v)); };
  EXPECT_NEAR(f.v, g(0.7), 1e-15);
  EXPECT_NEAR(f.d, (g(0.7 + h) - g(0.7 - h)) / (2 * h), 1e-7);
  EXPECT_NEAR(f.dd, (g(0.7 + h) - 2 * g(0.7) + g(0.7 - h)) / (h * h), 1e-5);
  const Jet r = sqrt(x);
  EXPECT_NEAR(r.dd, -0.25 * std::pow(0.7, -1.5), 1e-14);
}

TEST(ArcLengthTest, CircleAndInverse) {
  const ArcLength a(circle_curve(2.0));
  EXPECT_NEAR(a.length(), 4 * kPi, 1e-10);
  EXPECT_NEAR(a.s_of(1.0), 2.0, 1e-10);
  for (double s : {0.0, 1.3, 6.0, 4 * kPi}) EXPECT_NEAR(a.s_of(a.lambda_of(s)), s, 1e-10);
}

TEST(ArcLengthTest, ReparamIsUniform) {
  const UnitSpeedCurve u = arc_length_reparam(figure8_curve(false), 301);
  ASSERT_EQ(u.points.size(), 301u);
  for (std::size_t k = 0; k < u.tangents.size(); ++k) EXPECT_NEAR(u.tangents[k].norm(), 1.0, 1e-10);
  double chord = 0.0;
  for (std::size_t k = 1; k < u.points.size(); ++k) chord += (u.points[k] - u.points[k - 1]).norm();
  EXPECT_NEAR(chord, u.length, 1e-3);
}

TEST(Frenet, HelixHasConstantCurvatureAndTorsion) {
  const double a = 1.5, b = 0.5, c2 = a * a + b * b;
  const SynthesizedPulse sp = curve_to_pulse(helix(a, b), 20.0);
  for (std::size_t k = 5; k + 5 < sp.s.size(); k += 97) {
    EXPECT_NEAR(std::abs(sp.curvature[k]), a / c2, 1e-6);
    EXPECT_NEAR(std::abs(sp.torsion[k]), b / c2, 1e-6);
  }
  EXPECT_FALSE(sp.planar);
}

TEST(Frenet, AnglesReproduceTangent) {
  const ParametricCurve c = figure8_curve(true);
  const UnitSpeedCurve u = arc_length_reparam(c, 401);
  const FrenetAngles f = frenet_angles(c, 401);
  for (std::size_t k = 0; k < f.s.size(); k += 10)
    EXPECT_LT((tangent_from_angles(f.psi[k], f.theta[k]) - u.tangents[k]).norm(), 1e-6) << k;
  for (std::size_t k = 1; k < f.phi.size(); ++k) EXPECT_LT(std::abs(f.phi[k] - f.phi[k - 1]), 0.5) << k;
}

TEST(Frenet, FrameIsOrthonormal) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const double psi = u(rng), th = u(rng), phi = u(rng);
    const Vec3 t = tangent_from_angles(psi, th), n = normal_from_angles(psi, th, phi),
               b = binormal_from_angles(psi, th, phi);
    EXPECT_NEAR(t.dot(n), 0.0, 1e-14);
    EXPECT_NEAR(n.norm(), 1.0, 1e-14);
    EXPECT_LT((t.cross(n) - b).norm(), 1e-14);
  }
}

TEST(PlaneCurvature, Circle) {
  const ParametricCurve c = circle_curve(4.0);
  EXPECT_NEAR(plane_curvature(c, 1.0), 0.25, 1e-14);
  EXPECT_NEAR(total_curvature(c), 2 * kPi, 1e-9);
  EXPECT_NEAR(plane_net_area(c), 2 * kPi * 16.0, 1e-8);
}

TEST(CurveToPulse, CircleGivesSquarePulse) {
  const SynthesizedPulse sp = curve_to_pulse(circle_curve(1.0), 10.0, 0.3);
  EXPECT_NEAR(sp.length, 2 * kPi, 1e-10);
  EXPECT_NEAR(sp.alpha, 10.0 / (2 * kPi), 1e-12);
  EXPECT_NEAR(sp.pulse.amplitude(4.0), 2 * kPi / 10.0, 1e-9);
  EXPECT_NEAR(sp.pulse.phase(4.0), 0.3, 1e-12);
  EXPECT_NEAR(sp.pulse.area(), sp.total_rotation, 1e-6);
  EXPECT_NEAR(sp.total_rotation, 2 * kPi, 1e-9);
  EXPECT_EQ(sp.times().size(), sp.s.size());
}

TEST(FromPoints, InterpolatesAndIsContinuous) {
  std::vector<Vec3> pts;
  for (int k = 0; k <= 8; ++k) pts.emplace_back(std::cos(k * kPi / 4), std::sin(k * kPi / 4), 0.0);
  const ParametricCurve c = ParametricCurve::from_points("ring", pts);
  EXPECT_EQ(c.lower(), 0.0);
  EXPECT_EQ(c.upper(), 8.0);
  for (int k = 0; k <= 8; ++k) EXPECT_LT((c.point(k) - pts[k]).norm(), 1e-12);
  for (double b : c.breakpoints()) {
    const CurveSample l = c.sample_in_segment(c.segment_index(b) - 1, b);
    const CurveSample r = c.sample(b);
    EXPECT_LT((l.d1 - r.d1).norm(), 1e-10);
    EXPECT_LT((l.d2 - r.d2).norm(), 1e-10);
  }
  EXPECT_TRUE(c.planar());
  EXPECT_THROW(ParametricCurve::from_points("x", {Vec3::Zero()}), std::invalid_argument);
}

TEST(Regularity, StationaryPointRejected) {
  // (l^3, l^2) has zero speed at l = 0.
  const ParametricCurve c("cusp", -1.0, 1.0, [](Jet l) { return JetVec{l * l * l, l * l, Jet(0.0)}; });
  EXPECT_THROW(curve_to_pulse(c, 10.0), NonRegularCurveError);
}

TEST(Piecewise, DiscontinuousSegmentsRejected) {
  std::vector<ParametricCurve::Segment> segs;
  segs.push_back({0.0, 1.0, [](Jet l) { return JetVec{l, Jet(0.0), Jet(0.0)}; }});
  segs.push_back({1.0, 2.0, [](Jet l) { return JetVec{l, Jet(1.0), Jet(0.0)}; }});
  EXPECT_THROW(ParametricCurve("gap", segs), std::invalid_argument);
}

TEST(Kabsch, RecoversRigidMotion) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n;
  std::vector<Vec3> a;
  for (int k = 0; k < 30; ++k) a.emplace_back(n(rng), n(rng), n(rng));
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.9, Vec3(1, 2, -1).normalized()).toRotationMatrix();
  const Vec3 t(0.5, -2.0, 1.0);
  std::vector<Vec3> b;
  for (const auto& p : a) b.push_back(rot * p + t);
  const RigidTransform x = kabsch(a, b);
  EXPECT_LT((x.rotation - rot).norm(), 1e-12);
  EXPECT_LT((x.translation - t).norm(), 1e-12);
  std::vector<Vec3> c;
  for (const auto& p : a) c.push_back(x.apply(p));
  EXPECT_LT(hausdorff_distance(b, c), 1e-12);
  EXPECT_THROW(kabsch(a, std::vector<Vec3>(3)), std::invalid_argument);
}

TEST(Kabsch, ReflectionNotUsed) {
  std::vector<Vec3> a = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
  std::vector<Vec3> b;
  for (const auto& p : a) b.emplace_back(p.x(), p.y(), -p.z());
  EXPECT_NEAR(kabsch(a, b).rotation.determinant(), 1.0, 1e-12);
}

TEST(Distances, HausdorffAndDiameter) {
  const std::vector<Vec3> a = {{0, 0, 0}, {1, 0, 0}};
  const std::vector<Vec3> b = {{0, 0, 0}, {1, 0.5, 0}, {3, 0, 0}};
  EXPECT_NEAR(hausdorff_distance(a, b), 2.0, 1e-15);
  EXPECT_NEAR(diameter(b), 3.0, 1e-15);
}
