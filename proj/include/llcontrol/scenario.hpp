#pragma once

// End-to-end runs driven by a ScenarioConfig. Each run writes CSV results and
// a manifest.json into the output directory; the manifest carries the fully
// resolved configuration, so a run can be repeated from it alone.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "llcontrol/config.hpp"
#include "llcontrol/trajectory.hpp"

namespace llc {

const char* toolkit_version();

enum class RunStatus { Ok = 0, Invalid = 1, NumericalFailure = 2 };

struct PhaseSummary {
  std::string name;
  double t_start = 0.0;
  double t_end = 0.0;
  std::optional<Vec3> target;
  double final_l2 = 0.0;  // to the target, or to the mean direction when free
  bool failed = false;
};

struct ScenarioResult {
  RunStatus status = RunStatus::Ok;
  std::string message;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> outputs;
  std::vector<PhaseSummary> phases;
  // Headline numbers (final distances, loop areas, check outcomes).
  std::map<std::string, double> summary;
  double wall_time_s = 0.0;
};

/// Runs the scenario and writes its outputs. Numerical failures do not throw:
/// partial outputs are kept and the manifest is marked failed.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Repeats a run from a manifest written by run_scenario; `output_dir`
/// replaces the recorded directory when non-empty.
ScenarioResult replay_manifest(const std::filesystem::path& manifest,
                               const std::filesystem::path& output_dir = {});

/// Loads the "config" object of a manifest.
KeyValueConfig manifest_config(const std::filesystem::path& manifest);

/// Long-format trajectory (t,node_index,x,m1,m2,m3), with times shifted by
/// `t_offset`. Appends when `append` is set (no header).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          double t_offset = 0.0, bool append = false);
void write_diagnostics_csv(const std::filesystem::path& path, const Trajectory& traj,
                           double t_offset = 0.0, bool append = false);

}  // namespace llc
