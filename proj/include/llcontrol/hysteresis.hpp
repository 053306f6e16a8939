#pragma once

// Periodic-forcing experiments: drive one component with
// amplitude * cos(omega t), record the same component of m at a fixed point,
// and measure the input-output loop traced over the final forcing period.
// A loop whose area survives as omega -> 0 indicates hysteresis.

#include <optional>
#include <utility>
#include <vector>

#include "llcontrol/discretization.hpp"
#include "llcontrol/integrator.hpp"

namespace llc {

enum class HysteresisModel { Nonlinear, Linear };

struct HysteresisConfig {
  double omega = 1.0;
  double amplitude = 0.001;
  int component = 1;  // 1-based
  double observation_point = 0.6;
  int n_periods = 3;
  bool controlled = false;
  int samples_per_period = 256;
  HysteresisModel model = HysteresisModel::Nonlinear;
  Vec3 linear_base = Vec3::UnitX();  // equilibrium for the linear model
  MassTreatment mass = MassTreatment::Lumped;
  // Unset: the largest stable step for the mesh.
  std::optional<double> max_dt;

  void validate(const PhysicalParams& params) const;
};

struct LoopSample {
  double input = 0.0;
  double output = 0.0;
};

struct HysteresisLoop {
  double omega = 0.0;
  std::vector<LoopSample> samples;  // final period, first and last at the same phase
  double area = 0.0;
};

/// Absolute shoelace area of the closed polygon through the samples.
/// Throws ValidationError("degenerate loop") for fewer than three samples.
double loop_area(const std::vector<LoopSample>& samples);

/// Integrates n_periods forcing periods and extracts the final-period loop.
/// `control` supplies gain and target when config.controlled is set; its drive
/// is ignored in favour of the one described by `config`.
HysteresisLoop run_hysteresis(const HysteresisConfig& config, const MagnetizationField& m0,
                              const PhysicalParams& params, const ControlSpec& control);

/// One run per omega, executed concurrently; results come back in the order of
/// `omegas`.
std::vector<HysteresisLoop> run_hysteresis_sweep(const HysteresisConfig& config,
                                                 const std::vector<double>& omegas,
                                                 const MagnetizationField& m0,
                                                 const PhysicalParams& params,
                                                 const ControlSpec& control,
                                                 bool parallel = true);

struct PersistenceVerdict {
  bool persistent = false;
  double ratio = 0.0;  // area(omega_min) / area(omega_max)
  double threshold = 0.1;
  std::vector<std::pair<double, double>> table;  // (omega, area), decreasing omega
};

/// Persistent when area at the lowest frequency is at least `threshold` times
/// the area at the highest. Requires two or more loops with strictly
/// decreasing omega.
PersistenceVerdict persistence_test(const std::vector<HysteresisLoop>& loops,
                                    double threshold = 0.1);

}  // namespace llc
