#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "qeed/library.hpp"

using namespace qeed;

namespace {
constexpr double kPi = 3.141592653589793;
}

TEST(Library, NamesUnique) {
  const auto names = PulseLibrary::bundled().names();
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  EXPECT_GE(names.size(), 18u);
}

TEST(Library, PrintedRows) {
  const auto& lib = PulseLibrary::bundled();
  const auto& a = lib.at("R1_perp_pi").params;
  EXPECT_EQ(a.a, (std::vector<double>{0.010, -0.259, -0.033}));
  EXPECT_EQ(a.phi, (std::vector<double>{-0.015, -0.038}));
  EXPECT_EQ(lib.at("R1_perp_2pi").params.a, (std::vector<double>{0.258, 0.183}));
  const auto& ex = lib.at("Rex_perp_9pi4");
  EXPECT_EQ(ex.params.a, (std::vector<double>{0.147, -0.089, -0.613, -0.161}));
  EXPECT_TRUE(ex.extended);
  const auto& all = lib.at("R1_all_3pi2").params;
  EXPECT_EQ(all.b, (std::vector<double>{0.083, 0.362, 1.174, 0.237, 0.074}));
  EXPECT_EQ(all.psi, (std::vector<double>{0.022, 0.017, 0.011, -0.037}));
  const auto& xy = lib.at("R1_all_pi_xy");
  EXPECT_EQ(xy.params.scheme, DriveScheme::InPhaseQuadrature);
  EXPECT_EQ(xy.params.b, (std::vector<double>{-0.327, -0.127, 0.167, 0.066}));
  EXPECT_EQ(xy.robust_axes, (std::set<Axis>{Axis::X, Axis::Y, Axis::Z}));
}

TEST(Library, RefinedRowsStayClose) {
  const auto& lib = PulseLibrary::bundled();
  for (const auto& e : lib.entries()) {
    if (e.variant != "refined") continue;
    const std::string base = e.name.substr(0, e.name.size() - std::string("_refined").size());
    ASSERT_TRUE(lib.contains(base)) << e.name;
    const auto x = e.params.pack(true), y = lib.at(base).params.pack(true);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t k = 0; k < x.size(); ++k) EXPECT_LT(std::abs(x[k] - y[k]), 0.02) << e.name << " " << k;
    EXPECT_EQ(e.angle, lib.at(base).angle);
  }
}

TEST(Library, AreaMatchesAngleForZRobustRows) {
  // A z-robust x rotation with constant phase has area equal to its angle (mod 2 pi).
  const auto& e = PulseLibrary::bundled().at("R1_perp_2pi_refined");
  EXPECT_NEAR(std::remainder(e.pulse().area() - e.angle, 2 * kPi), 0.0, 1e-3);
  EXPECT_EQ(e.gate_axis, Axis::X);
}

TEST(Library, UnknownNameThrows) {
  EXPECT_THROW(PulseLibrary::bundled().at("nope"), std::out_of_range);
  EXPECT_FALSE(PulseLibrary::bundled().contains("nope"));
}

TEST(Library, ParseErrors) {
  EXPECT_THROW(PulseLibrary::parse("{\"entries\": [{\"name\": 1}]}"), std::exception);
  EXPECT_THROW(PulseLibrary::parse("not json"), std::exception);
  const PulseLibrary l = PulseLibrary::parse(
      R"({"version": 1, "entries": [{"name": "k", "variant": "printed", "gate": {"axis": "y", "angle": 1.5},
          "robust_axes": ["z"], "pulse": {"T_ns": 20, "a": [0.1], "phi": []}}]})");
  EXPECT_EQ(l.at("k").gate_axis, Axis::Y);
  EXPECT_DOUBLE_EQ(l.at("k").params.duration, 20.0);
}
