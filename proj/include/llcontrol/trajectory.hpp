#pragma once

#include <string>
#include <vector>

#include "llcontrol/discretization.hpp"

namespace llc {

struct DiagnosticRecord {
  double t = 0.0;
  double l2_distance_to_target = 0.0;
  double h1_distance_to_target = 0.0;
  double lyapunov = 0.0;
  double max_norm_drift = 0.0;
  double exchange_energy = 0.0;  // 1/2 |m_x|^2
};

/// Recorded samples of one integration. times are strictly increasing and
/// states/diagnostics are aligned with them. A run that blew up keeps the
/// samples recorded before the failure and sets `failed`.
struct Trajectory {
  std::vector<double> times;
  std::vector<MagnetizationField> states;
  std::vector<DiagnosticRecord> diagnostics;
  bool failed = false;
  std::string message;
  std::vector<std::string> warnings;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  const MagnetizationField& final_state() const { return states.back(); }
};

}  // namespace llc
