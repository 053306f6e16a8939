#include "llcontrol/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace llc {

void IntegratorOptions::validate() const {
  if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("dt must be > 0");
  if (!std::isfinite(t_final) || t_final <= 0.0) throw ValidationError("t_final must be > 0");
  if (dt > t_final) throw ValidationError("dt must not exceed t_final");
  if (record_stride && *record_stride < 1) throw ValidationError("record_stride must be >= 1");
}

std::size_t IntegratorOptions::step_count() const {
  const double q = t_final / dt;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, q)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(q));
}

std::size_t IntegratorOptions::resolved_stride() const {
  if (record_stride) return *record_stride;
  constexpr std::size_t kMaxSamples = 10000;
  const std::size_t n = step_count();
  return n < kMaxSamples ? 1 : (n + kMaxSamples - 2) / (kMaxSamples - 1);
}

double max_stable_dt(const Mesh& mesh, const PhysicalParams& params, double gain,
                     MassTreatment mass) {
  const double h2 = mesh.h() * mesh.h();
  const double c = mass == MassTreatment::Lumped ? 4.0 : 12.0;
  return 2.4 / (c * std::sqrt(1.0 + params.nu * params.nu) / h2 + gain);
}

namespace {

std::vector<Vec3> axpy(const MagnetizationField& x, double a, const MagnetizationField& y) {
  std::vector<Vec3> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = x[i] + a * y[i];
  return out;
}

std::string blow_up_message(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "numerical blow-up at t=%.9g", t);
  return buf;
}

}  // namespace

MagnetizationField step_rk4(const MagnetizationField& state, double t, double dt,
                            const RhsFunction& rhs_fn, bool renormalize) {
  if (!(dt > 0.0)) throw ValidationError("dt must be > 0");
  try {
    const Mesh& mesh = state.mesh();
    const MagnetizationField k1 = rhs_fn(state, t);
    const MagnetizationField k2 =
        rhs_fn(MagnetizationField(mesh, axpy(state, 0.5 * dt, k1)), t + 0.5 * dt);
    const MagnetizationField k3 =
        rhs_fn(MagnetizationField(mesh, axpy(state, 0.5 * dt, k2)), t + 0.5 * dt);
    const MagnetizationField k4 = rhs_fn(MagnetizationField(mesh, axpy(state, dt, k3)), t + dt);
    std::vector<Vec3> next(state.size());
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = state[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (renormalize) next[i] = project_to_sphere(next[i]);
    }
    return MagnetizationField(mesh, std::move(next));
  } catch (const NumericalError&) {
    throw NumericalError(blow_up_message(t));
  } catch (const ValidationError& e) {
    // project_to_sphere on a collapsed node
    throw NumericalError(blow_up_message(t) + ": " + e.what());
  }
}

Trajectory integrate_system(const MagnetizationField& initial, const RhsFunction& rhs_fn,
                            const RecordFunction& record_fn, const IntegratorOptions& opts,
                            bool renormalize) {
  opts.validate();
  const std::size_t n_steps = opts.step_count();
  const std::size_t stride = opts.resolved_stride();

  Trajectory traj;
  auto record = [&](const MagnetizationField& s, double t) {
    traj.times.push_back(t);
    traj.states.push_back(s);
    traj.diagnostics.push_back(record_fn(s, t));
  };

  MagnetizationField state = initial;
  double t = 0.0;
  record(state, t);
  for (std::size_t step = 1; step <= n_steps; ++step) {
    const double t_next = step == n_steps ? opts.t_final : static_cast<double>(step) * opts.dt;
    try {
      state = step_rk4(state, t, t_next - t, rhs_fn, renormalize);
    } catch (const NumericalError& e) {
      traj.failed = true;
      traj.message = e.what();
      return traj;
    }
    t = t_next;
    if (step % stride == 0 || step == n_steps) record(state, t);
  }
  return traj;
}

Trajectory integrate(const MagnetizationField& initial, const PhysicalParams& params,
                     const std::optional<ControlSpec>& spec, const IntegratorOptions& opts) {
  params.validate();
  opts.validate();
  if (spec) spec->validate();
  if (initial.mesh().length() != params.length)
    throw ValidationError("mesh length does not match the physical length");
  const double gain = spec ? spec->gain : 0.0;
  const double dt_max = max_stable_dt(initial.mesh(), params, gain, opts.mass);
  if (!opts.allow_large_dt && opts.dt > dt_max) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "dt too large for mesh (dt=%g, limit %g for h=%g)", opts.dt,
                  dt_max, initial.mesh().h());
    throw ValidationError(buf);
  }

  std::vector<std::string> warnings;
  bool renormalize = !spec;
  if (opts.renormalize) {
    if (*opts.renormalize && spec) {
      warnings.emplace_back(
          "renormalization requested for a controlled run; ignored because the control "
          "moves m off the unit sphere");
    } else if (!*opts.renormalize && !spec) {
      warnings.emplace_back("renormalization disabled for an uncontrolled run; norm drift unchecked");
      renormalize = false;
    }
  }

  const auto disc = std::make_shared<const Discretization>(initial.mesh(), opts.mass);
  const ControlSpec* control = spec ? &*spec : nullptr;
  RhsFunction rhs_fn = [disc, params, control](const MagnetizationField& m, double t) {
    return rhs(m, *disc, params, control, t);
  };

  RecordFunction record_fn;
  if (spec) {
    const Vec3 r = spec->target.vector();
    record_fn = [r](const MagnetizationField& m, double t) {
      return make_record(t, m, r, LyapunovKind::Controlled);
    };
  } else {
    // Free runs have no target; distances are measured to the direction of the
    // spatial mean, i.e. to the nearest-looking member of the equilibrium set.
    record_fn = [](const MagnetizationField& m, double t) {
      Vec3 mean = Vec3::Zero();
      const auto w = trapezoid_weights(m.mesh());
      for (std::size_t i = 0; i < m.size(); ++i) mean += w[i] * m[i];
      const Vec3 ref = mean.norm() > 0.0 ? Vec3(mean.normalized()) : Vec3(Vec3::UnitX());
      return make_record(t, m, ref, LyapunovKind::Exchange);
    };
  }

  Trajectory traj = integrate_system(initial, rhs_fn, record_fn, opts, renormalize);
  traj.warnings.insert(traj.warnings.begin(), warnings.begin(), warnings.end());
  return traj;
}

}  // namespace llc
