#pragma once

// Fixed-step classic RK4 for the semidiscrete system, with optional
// projection of every nodal vector back onto the unit sphere.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>

#include "llcontrol/diagnostics.hpp"
#include "llcontrol/discretization.hpp"
#include "llcontrol/trajectory.hpp"

namespace llc {

struct IntegratorOptions {
  double dt = 1e-3;
  double t_final = 1.0;
  // Unset: renormalize uncontrolled runs only.
  std::optional<bool> renormalize;
  // Unset: the smallest stride that keeps at most 10000 samples.
  std::optional<std::size_t> record_stride;
  // Skip the time-step stability check.
  bool allow_large_dt = false;
  MassTreatment mass = MassTreatment::Lumped;

  void validate() const;
  std::size_t step_count() const;
  std::size_t resolved_stride() const;
};

using RhsFunction = std::function<MagnetizationField(const MagnetizationField&, double)>;
using RecordFunction = std::function<DiagnosticRecord(const MagnetizationField&, double)>;

/// Largest time step the explicit scheme accepts on this mesh. The
/// semidiscrete operator has spectral radius about c sqrt(1 + nu^2) / h^2 + k,
/// c = 4 (lumped) or 12 (consistent), and RK4 is stable for |dt lambda| up to
/// roughly 2.6 on both axes; 2.4 is used.
double max_stable_dt(const Mesh& mesh, const PhysicalParams& params, double gain = 0.0,
                     MassTreatment mass = MassTreatment::Lumped);

/// One classic RK4 step. Throws NumericalError("numerical blow-up at t=...")
/// when the update is not finite.
MagnetizationField step_rk4(const MagnetizationField& state, double t, double dt,
                            const RhsFunction& rhs_fn, bool renormalize = false);

/// Generic driver shared by the nonlinear and linear systems. Numerical
/// blow-up ends the run early with `failed` set instead of throwing.
Trajectory integrate_system(const MagnetizationField& initial, const RhsFunction& rhs_fn,
                            const RecordFunction& record_fn, const IntegratorOptions& opts,
                            bool renormalize);

/// Closed-loop (or, without `spec`, free) Landau-Lifshitz evolution from `initial`.
/// Throws ValidationError("dt too large for mesh") unless opts.allow_large_dt.
Trajectory integrate(const MagnetizationField& initial, const PhysicalParams& params,
                     const std::optional<ControlSpec>& spec, const IntegratorOptions& opts);

}  // namespace llc
