#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "llcontrol/hysteresis.hpp"

using namespace llc;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<HysteresisLoop> synthetic(const std::vector<double>& omegas,
                                      const std::vector<double>& areas) {
  std::vector<HysteresisLoop> out;
  for (std::size_t i = 0; i < omegas.size(); ++i) out.push_back({omegas[i], {}, areas[i]});
  return out;
}

// A uniform state under uniform forcing stays uniform: m_t = k (r - m) + A cos(w t) e_c.
// The steady response is an ellipse in the (input, output) plane with area
// pi A^2 w / (k^2 + w^2); for k = 0 the response A/w sin(w t) gives pi A^2 / w.
double ellipse_area(double amplitude, double omega, double k) {
  return kPi * amplitude * amplitude * omega / (k * k + omega * omega);
}

}  // namespace

TEST(LoopArea, Shapes) {
  std::vector<LoopSample> circle;
  for (int i = 0; i < 360; ++i)
    circle.push_back({std::cos(2 * kPi * i / 360), std::sin(2 * kPi * i / 360)});
  EXPECT_NEAR(loop_area(circle), kPi, 1e-3 * kPi);
  EXPECT_EQ(loop_area({{0, 0}, {1, 1}, {2, 2}, {3, 3}}), 0.0);
  EXPECT_DOUBLE_EQ(loop_area({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 1.0);
  EXPECT_DOUBLE_EQ(loop_area({{0, 1}, {1, 1}, {1, 0}, {0, 0}}), 1.0);
  try {
    loop_area({{0, 0}, {1, 1}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "degenerate loop");
  }
}

TEST(LoopArea, SmallLoopFarFromOrigin) {
  std::vector<LoopSample> s;
  for (int i = 0; i < 256; ++i)
    s.push_back({1e-3 * std::cos(2 * kPi * i / 256), 1.0 + 1e-3 * std::sin(2 * kPi * i / 256)});
  EXPECT_NEAR(loop_area(s), kPi * 1e-6, 1e-3 * kPi * 1e-6);
}

TEST(Persistence, Verdicts) {
  const std::vector<double> w{1, 0.1, 0.01, 0.001};
  const auto yes = persistence_test(synthetic(w, {0.002, 0.0019, 0.0019, 0.0018}));
  EXPECT_TRUE(yes.persistent);
  EXPECT_NEAR(yes.ratio, 0.9, 1e-12);
  EXPECT_EQ(yes.table.size(), 4u);
  const auto no = persistence_test(synthetic(w, {0.002, 0.0005, 0.0001, 0.00001}));
  EXPECT_FALSE(no.persistent);
  EXPECT_NEAR(no.ratio, 0.005, 1e-12);
  EXPECT_THROW(persistence_test(synthetic({1}, {0.1})), ValidationError);
  EXPECT_THROW(persistence_test(synthetic({0.1, 1}, {0.1, 0.1})), ValidationError);
}

TEST(Config, Validation) {
  const PhysicalParams p;
  HysteresisConfig c;
  EXPECT_NO_THROW(c.validate(p));
  c.n_periods = 2;
  EXPECT_THROW(c.validate(p), ValidationError);
  c = {};
  c.observation_point = 1.5;
  EXPECT_THROW(c.validate(p), ValidationError);
  c = {};
  c.omega = 0.0;
  EXPECT_THROW(c.validate(p), ValidationError);
  c = {};
  c.model = HysteresisModel::Linear;
  c.linear_base = Vec3(0, 0.5, 0);
  EXPECT_THROW(c.validate(p), ValidationError);
}

TEST(Run, UncontrolledUniformMatchesClosedForm) {
  const Mesh mesh(5, 1.0);
  HysteresisConfig c;
  c.omega = 0.1;
  const auto loop = run_hysteresis(c, MagnetizationField(mesh, Vec3(1, 0, 0)), {}, ControlSpec{});
  ASSERT_EQ(loop.samples.size(), 257u);
  // The polygon through 256 samples of an ellipse has area (N / 2 pi) sin(2 pi / N) times the ellipse.
  const double polygon = 256 / (2 * kPi) * std::sin(2 * kPi / 256);
  EXPECT_NEAR(loop.area, polygon * ellipse_area(1e-3, 0.1, 0.0), 1e-9 * loop.area);
  EXPECT_NEAR(loop.samples.front().input, loop.samples.back().input, 1e-15);
}

TEST(Run, ControlledUniformMatchesClosedForm) {
  const Mesh mesh(5, 1.0);
  HysteresisConfig c;
  c.omega = 1.0;
  c.controlled = true;
  c.n_periods = 6;  // let the e^{-kt} transient die out
  ControlSpec k;
  k.gain = 0.5;
  k.target = Equilibrium(Vec3(1, 0, 0));
  const auto loop = run_hysteresis(c, MagnetizationField(mesh, Vec3(1, 0, 0)), {}, k);
  const double polygon = 256 / (2 * kPi) * std::sin(2 * kPi / 256);
  EXPECT_NEAR(loop.area, polygon * ellipse_area(1e-3, 1.0, 0.5), 1e-4 * loop.area);
}

TEST(Run, ZeroAmplitudeGivesZeroArea) {
  HysteresisConfig c;
  c.amplitude = 0.0;
  const auto loop = run_hysteresis(c, MagnetizationField(Mesh(5, 1.0), Vec3(0, 1, 0)), {}, ControlSpec{});
  EXPECT_EQ(loop.area, 0.0);
}

TEST(Run, OtherComponentsAndLinearModel) {
  const Mesh mesh(5, 1.0);
  HysteresisConfig c;
  c.omega = 1.0;
  c.component = 3;
  const auto l3 = run_hysteresis(c, MagnetizationField(mesh, Vec3(0, 0, 1)), {}, ControlSpec{});
  const double polygon = 256 / (2 * kPi) * std::sin(2 * kPi / 256);
  EXPECT_NEAR(l3.area, polygon * ellipse_area(1e-3, 1.0, 0.0), 1e-9);

  c.component = 1;
  c.model = HysteresisModel::Linear;
  const auto lin = run_hysteresis(c, MagnetizationField(mesh, Vec3(1, 0, 0)), {}, ControlSpec{});
  EXPECT_NEAR(lin.area, polygon * ellipse_area(1e-3, 1.0, 0.0), 1e-9);
}

TEST(Run, NonUniformStateStillLoops) {
  // Away from the uniform state the loop is no longer an exact ellipse but must stay finite.
  const Mesh mesh(5, 1.0);
  const auto m0 = sample_field(mesh, [](double x) {
    return Vec3(std::cos(kPi * x), std::sin(kPi * x), 0);
  });
  HysteresisConfig c;
  c.omega = 1.0;
  const auto loop = run_hysteresis(c, m0, {}, ControlSpec{});
  EXPECT_TRUE(std::isfinite(loop.area));
  EXPECT_GT(loop.area, 0.0);
}

TEST(Sweep, ParallelMatchesSerialAndKeepsOrder) {
  const Mesh mesh(5, 1.0);
  const std::vector<double> w{1.0, 0.5, 0.25};
  const MagnetizationField m0(mesh, Vec3(0, 1, 0));
  HysteresisConfig c;
  c.component = 2;
  const auto a = run_hysteresis_sweep(c, w, m0, {}, ControlSpec{}, true);
  const auto b = run_hysteresis_sweep(c, w, m0, {}, ControlSpec{}, false);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a[i].omega, w[i]);
    EXPECT_EQ(a[i].area, b[i].area);
  }
  EXPECT_TRUE(persistence_test(a).persistent);
}
