#pragma once

// Plain-text scenario configuration:
//
//   # comment
//   kind = steer
//   [physics]
//   nu = 0.02
//   length = 1
//   [control]
//   gain = 0.5
//   target = -1/sqrt(2), 0, 1/sqrt(2)
//
// Keys live in sections ("physics.nu"); only `kind` is top-level. Unknown keys
// are errors. Every error names the source line.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "llcontrol/hysteresis.hpp"
#include "llcontrol/integrator.hpp"
#include "llcontrol/model.hpp"

namespace llc {

/// Raised for malformed or invalid configuration; maps to exit status 1.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

struct ConfigEntry {
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

/// Flat "section.key" -> value map, in file order of first appearance.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(const std::string& text, const std::string& source = "<config>");
  static KeyValueConfig load(const std::filesystem::path& path);
  static KeyValueConfig from_map(const std::map<std::string, std::string>& entries,
                                 const std::string& source);

  /// "key=value" from the command line; replaces or adds the key.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, const std::string& value, int line = 0);

  const std::map<std::string, ConfigEntry>& entries() const { return entries_; }
  const std::string& source() const { return source_; }
  std::optional<ConfigEntry> find(const std::string& key) const;

 private:
  std::string source_;
  std::map<std::string, ConfigEntry> entries_;
};

enum class ScenarioKind { Simulate, Steer, SteerSequence, HysteresisSweep, Spectrum, Verify };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_kind(const std::string& s);

struct InitialCondition {
  enum class Kind { Uniform, SineCosine, CosineMode };
  Kind kind = Kind::SineCosine;
  Vec3 uniform = Vec3::UnitY();
  int mode = 1;       // cosine_mode: cos(mode pi x / L)
  int component = 1;  // cosine_mode: 1-based component carrying the cosine

  MagnetizationField sample(const Mesh& mesh) const;
  std::string to_string() const;
};

/// Parses "uniform:a1,a2,a3", "sine_cosine" or "cosine_mode:n,c".
InitialCondition parse_initial_condition(const std::string& s);

struct SequenceSettings {
  double settle_time = 30.0;
  double phase_time = 30.0;
  std::vector<Vec3> targets;
};

struct HysteresisSweepSettings {
  HysteresisConfig base;
  std::vector<double> omegas{1.0, 0.1, 0.01, 0.001};
  double threshold = 0.1;
  bool parallel = true;
};

struct SpectrumSettings {
  Vec3 base = Vec3::UnitX();
  int n_max = 50;
  double tolerance = 0.1;
};

struct VerifySettings {
  int n_fields = 1000;
  int n_elements = 128;
  unsigned long long seed = 20160101ULL;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Simulate;
  PhysicalParams params;
  int n_elements = 12;
  IntegratorOptions integrator;
  std::optional<ControlSpec> control;
  InitialCondition initial;
  std::filesystem::path output_dir = "out";
  SequenceSettings sequence;
  HysteresisSweepSettings hysteresis;
  SpectrumSettings spectrum;
  VerifySettings verify;

  std::vector<std::string> warnings;

  /// Every setting after defaults and overrides, as config text values.
  std::map<std::string, std::string> resolved() const;
};

/// Builds and validates a scenario. Throws ConfigError naming the line and key.
ScenarioConfig build_scenario(const KeyValueConfig& kv);

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides = {});

/// Real-number token: decimal literal, or [-][a/]sqrt(b).
double parse_real(const std::string& token);
std::string format_real(double v);

}  // namespace llc
