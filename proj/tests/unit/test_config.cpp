#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "llcontrol/config.hpp"

using namespace llc;

namespace {

ScenarioConfig build(const std::string& text) { return build_scenario(KeyValueConfig::parse(text, "t.ini")); }

std::string error_of(const std::string& text) {
  try {
    build(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const std::string kMinimal =
    "kind = simulate\n[physics]\nnu = 0.02\nL = 1\n[mesh]\nn_elements = 12\n"
    "[integrator]\ndt = 1e-3\nt_final = 1\n[initial]\nic = uniform:0,1,0\n";

}  // namespace

TEST(ParseReal, DecimalAndSqrtForms) {
  EXPECT_EQ(parse_real("0.5"), 0.5);
  EXPECT_EQ(parse_real(" -2e-3 "), -2e-3);
  EXPECT_NEAR(parse_real("1/sqrt(2)"), std::sqrt(0.5), 2e-16);
  EXPECT_NEAR(parse_real("-1/sqrt(2)"), -std::sqrt(0.5), 2e-16);
  EXPECT_NEAR(parse_real("sqrt(3)"), std::sqrt(3.0), 1e-15);
  EXPECT_THROW(parse_real("abc"), ValidationError);
  EXPECT_THROW(parse_real("sqrt(-1)"), ValidationError);
  EXPECT_THROW(parse_real(""), ValidationError);
  EXPECT_THROW(parse_real("inf"), ValidationError);
}

TEST(ParseReal, FormatRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -1e-300, 12345.678}) EXPECT_EQ(parse_real(format_real(v)), v);
}

TEST(Config, MinimalIsValid) {
  const auto c = build(kMinimal);
  EXPECT_EQ(c.kind, ScenarioKind::Simulate);
  EXPECT_EQ(c.n_elements, 12);
  EXPECT_EQ(c.integrator.dt, 1e-3);
  EXPECT_EQ(c.initial.kind, InitialCondition::Kind::Uniform);
  EXPECT_FALSE(c.control.has_value());
  EXPECT_TRUE(c.warnings.empty());
}

TEST(Config, WeakGainWarns) {
  const auto c = build("kind = steer\n[control]\ngain = 0.1\ntarget = 1, 0, 0\n[integrator]\nt_final = 1\n");
  ASSERT_EQ(c.warnings.size(), 1u);
  EXPECT_EQ(c.warnings[0], "k ≤ 8νL⁴ = 0.16; theorem bound not satisfied");
}

TEST(Config, NegativeDtRejectedWithLine) {
  const auto msg = error_of("kind = simulate\n[integrator]\ndt = -1\n");
  EXPECT_NE(msg.find("t.ini:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("integrator.dt"), std::string::npos) << msg;
}

TEST(Config, UnknownAndDuplicateKeys) {
  auto msg = error_of("kind = simulate\n[physics]\nnu = 0.02\nmu = 1\n");
  EXPECT_NE(msg.find("t.ini:4"), std::string::npos) << msg;
  EXPECT_NE(msg.find("unknown key 'physics.mu'"), std::string::npos) << msg;
  msg = error_of("[physics]\nnu = 0.02\nnu = 0.03\n");
  EXPECT_NE(msg.find("t.ini:3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("first on line 2"), std::string::npos) << msg;
  msg = error_of("[physics\n");
  EXPECT_NE(msg.find("t.ini:1"), std::string::npos) << msg;
  msg = error_of("just words\n");
  EXPECT_NE(msg.find("expected 'key = value'"), std::string::npos) << msg;
}

TEST(Config, InvalidValues) {
  EXPECT_NE(error_of("[physics]\nnu = -0.1\n").find("physics.nu"), std::string::npos);
  EXPECT_NE(error_of("[mesh]\nn_elements = 1\n").find("mesh too coarse"), std::string::npos);
  EXPECT_NE(error_of("[initial]\nic = uniform:1,1,0\n").find("initial.ic"), std::string::npos);
  EXPECT_NE(error_of("[initial]\nic = spiral\n").find("initial.ic"), std::string::npos);
  EXPECT_NE(error_of("kind = steer\n").find("control.gain"), std::string::npos);
  EXPECT_NE(error_of("kind = dance\n").find("kind"), std::string::npos);
  EXPECT_NE(error_of("[mesh]\nmass = diagonal\n").find("mesh.mass"), std::string::npos);
  EXPECT_NE(error_of("kind = hysteresis_sweep\n[hysteresis]\nomegas = 0.1, 1\n").find("hysteresis.omegas"),
            std::string::npos);
  EXPECT_NE(error_of("kind = simulate\n[integrator]\ndt = 0.05\n").find("dt too large for mesh"),
            std::string::npos);
}

TEST(Config, LargeDtAllowedOnRequest) {
  EXPECT_NO_THROW(build("kind = simulate\n[integrator]\ndt = 0.05\nallow_large_dt = true\n"));
}

TEST(Config, SteerTargetWithSqrt) {
  const auto c = build("kind = steer\n[control]\ngain = 0.5\ntarget = -1/sqrt(2), 0, 1/sqrt(2)\n");
  ASSERT_TRUE(c.control);
  EXPECT_NEAR(c.control->target.vector()[0], -std::sqrt(0.5), 2e-16);
  EXPECT_TRUE(c.warnings.empty());
  EXPECT_NE(error_of("kind = steer\n[control]\ngain = 0.5\ntarget = 1, 1, 0\n").find("control.target"),
            std::string::npos);
}

TEST(Config, SequenceTargets) {
  const auto c = build("kind = steer_sequence\n[control]\ngain = 0.5\n[sequence]\ntargets = 1, 0, 0; 0, 0, 1\n");
  ASSERT_EQ(c.sequence.targets.size(), 2u);
  EXPECT_EQ(c.sequence.targets[1], Vec3(0, 0, 1));
}

TEST(Config, MassTreatmentKey) {
  EXPECT_EQ(build(kMinimal).integrator.mass, MassTreatment::Lumped);
  const auto c = build(kMinimal + "[mesh]\n");  // re-opening a section is fine
  EXPECT_EQ(c.integrator.mass, MassTreatment::Lumped);
  auto kv = KeyValueConfig::parse(kMinimal, "t.ini");
  kv.apply_override("mesh.mass=consistent");
  const auto d = build_scenario(kv);
  EXPECT_EQ(d.integrator.mass, MassTreatment::Consistent);
  EXPECT_EQ(d.hysteresis.base.mass, MassTreatment::Consistent);
}

TEST(Config, OverridesReplaceAndReportAsOverride) {
  auto kv = KeyValueConfig::parse(kMinimal, "t.ini");
  kv.apply_override("integrator.t_final = 2.5");
  EXPECT_EQ(build_scenario(kv).integrator.t_final, 2.5);
  EXPECT_THROW(kv.apply_override("no_equals"), ConfigError);
  kv.apply_override("physics.nu=-1");
  try {
    build_scenario(kv);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("t.ini:override"), std::string::npos) << e.what();
  }
}

TEST(Config, ResolvedRoundTrips) {
  const std::string text =
      "kind = steer\n[physics]\nnu = 0.03\n[control]\ngain = 0.7\ntarget = 0, 0.6, 0.8\n"
      "drive_amplitude = 0.01\ndrive_omega = 2\ndrive_component = 3\n"
      "[initial]\nic = cosine_mode:2,3\n[mesh]\nmass = consistent\n";
  const auto a = build(text);
  const auto r = a.resolved();
  const auto b = build_scenario(KeyValueConfig::from_map(r, "resolved"));
  EXPECT_EQ(b.resolved(), r);
  EXPECT_EQ(b.params.nu, 0.03);
  ASSERT_TRUE(b.control && b.control->drive);
  EXPECT_EQ(b.control->drive->component, 3);
  EXPECT_EQ(b.initial.mode, 2);
  EXPECT_EQ(b.initial.component, 3);
}

TEST(Config, LoadFromFileAndMissingFile) {
  const auto dir = std::filesystem::temp_directory_path() / "llcontrol_config_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "a.ini") << kMinimal;
  }
  const auto c = load_config(dir / "a.ini", {"integrator.t_final=0.5"});
  EXPECT_EQ(c.integrator.t_final, 0.5);
  EXPECT_THROW(load_config(dir / "missing.ini"), ConfigError);
  std::filesystem::remove_all(dir);
}

TEST(InitialConditions, Sampling) {
  const Mesh mesh(4, 1.0);
  const auto sc = parse_initial_condition("sine_cosine").sample(mesh);
  EXPECT_NEAR(sc[1][0], 1.0, 1e-15);  // sin(pi/2)
  const auto cm = parse_initial_condition("cosine_mode:1,2").sample(mesh);
  EXPECT_EQ(cm[0], Vec3(0, 1, 0));
  EXPECT_NEAR(cm[2][1], 0.0, 1e-15);
  EXPECT_EQ(cm[4], Vec3(0, -1, 0));
  EXPECT_EQ(parse_initial_condition("uniform:0,0,1").to_string(), "uniform:0,0,1");
  EXPECT_THROW(parse_initial_condition("cosine_mode:1,4"), ValidationError);
}

TEST(Presets, AllLoad) {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(LLCONTROL_PRESETS_DIR)) {
    if (e.path().extension() != ".ini") continue;
    EXPECT_NO_THROW(load_config(e.path())) << e.path();
    ++n;
  }
  EXPECT_GE(n, 11);
}
