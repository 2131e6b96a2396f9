#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qeed/json_writer.hpp"
#include "qeed/pulse_io.hpp"

using namespace qeed;

namespace {

FourierPulseParams sample_params() {
  FourierPulseParams p;
  p.duration = 50.0;
  p.a = {0.1234567890123456789, -0.2, 1.0 / 3.0};
  p.phi = {0.1, 2.0 / 7.0};
  p.b = {0.5};
  p.n = 2;
  return p;
}

}  // namespace

TEST(FormatNumber, SeventeenDigits) {
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(50.0), "50");
  EXPECT_EQ(std::stod(format_number(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(DumpJson, ScalarArraysOnOneLine) {
  const nlohmann::json j = {{"a", {1.0, 2.5}}, {"b", "x"}};
  const std::string s = dump_json(j);
  EXPECT_NE(s.find("[1, 2.5]"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(s), j);
}

TEST(PulseJson, RoundTripIsExact) {
  const FourierPulseParams p = sample_params();
  const std::string text = dump_json(to_json(p));
  const PulseFile f = parse_pulse(text);
  ASSERT_TRUE(f.is_fourier());
  EXPECT_EQ(*f.fourier, p);
  EXPECT_EQ(dump_json(to_json(*f.fourier)), text);
}

TEST(PulseJson, DriveField) {
  FourierPulseParams p = sample_params();
  p.scheme = DriveScheme::InPhaseQuadrature;
  p.psi = {};
  p.b = {0.1};
  const auto j = to_json(p);
  EXPECT_EQ(j.at("drive"), "xy-quadrature");
  EXPECT_EQ(parse_pulse(j.dump()).fourier->scheme, DriveScheme::InPhaseQuadrature);
}

TEST(PulseJson, UnitsApplied) {
  FourierPulseParams p = sample_params();
  p.unit = AmplitudeUnit::GHzLinear;
  const PulseFile f = parse_pulse(to_json(p).dump());
  FourierPulseParams q = sample_params();
  EXPECT_NEAR(f.pulse().amplitude(10.0), 2 * 3.141592653589793 * fourier_waveform(q).amplitude(10.0), 1e-14);
}

TEST(PulseJson, ErrorsNameFieldAndLine) {
  const std::string text = "{\n  \"T_ns\": 50,\n  \"a\": [0.1, 0.2],\n  \"phi\": [0.1, 0.2]\n}";
  try {
    parse_pulse(text, "p.json");
    FAIL() << "expected a parse error";
  } catch (const PulseParseError& e) {
    EXPECT_EQ(e.field(), "phi");
    EXPECT_EQ(e.line(), 4);
    EXPECT_EQ(e.source(), "p.json");
  }
}

TEST(PulseJson, SyntaxErrorLine) {
  try {
    parse_pulse("{\n \"T_ns\": 50,\n \"a\": [1,,]\n}", "s.json");
    FAIL();
  } catch (const PulseParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(PulseJson, RejectsBadValues) {
  EXPECT_THROW(parse_pulse(R"({"T_ns": -1, "a": [0.1], "phi": []})"), PulseParseError);
  EXPECT_THROW(parse_pulse(R"({"T_ns": 5, "a": ["x"], "phi": []})"), PulseParseError);
  EXPECT_THROW(parse_pulse(R"({"T_ns": 5, "a": [0.1], "phi": [], "n": 3})"), PulseParseError);
  EXPECT_THROW(parse_pulse(R"({"T_ns": 5, "a": [0.1], "phi": [], "amplitude_unit": "volts"})"), PulseParseError);
  EXPECT_THROW(parse_pulse(R"({"T_ns": 5, "a": [0.1], "phi": [], "drive": "sideways"})"), PulseParseError);
  EXPECT_THROW(parse_pulse(R"([1, 2])"), PulseParseError);
}

TEST(PulseJson, SampledPulse) {
  const auto j = sampled_pulse_json(10.0, {0.0, 0.5, 1.0, 0.5, 0.0}, {0.0, 0.1, 0.2, 0.3, 0.4});
  const PulseFile f = parse_pulse(j.dump());
  EXPECT_FALSE(f.is_fourier());
  const ControlPulse c = f.pulse();
  EXPECT_DOUBLE_EQ(c.duration(), 10.0);
  EXPECT_NEAR(c.amplitude(5.0), 1.0, 1e-12);
  EXPECT_NEAR(c.phase(5.0), 0.2, 1e-12);
  EXPECT_THROW(parse_pulse(R"({"T_ns": 5, "omega": [0.1]})"), PulseParseError);
  EXPECT_THROW(parse_pulse(R"({"T_ns": 5, "omega": [0.1, 0.2], "phase": [0]})"), PulseParseError);
}

TEST(PulseJson, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "qeed_pulse_io_test.json";
  save_json(path, to_json(sample_params()));
  EXPECT_EQ(*load_pulse(path).fourier, sample_params());
  std::filesystem::remove(path);
  EXPECT_THROW(load_pulse(path), PulseParseError);
}
