#include "llcontrol/hysteresis.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <string>

#include "llcontrol/spectral.hpp"

namespace llc {

void HysteresisConfig::validate(const PhysicalParams& params) const {
  if (!std::isfinite(omega) || omega <= 0.0) throw ValidationError("omega must be > 0");
  if (!std::isfinite(amplitude) || amplitude < 0.0)
    throw ValidationError("amplitude must be >= 0");
  if (component < 1 || component > 3) throw ValidationError("component must be 1, 2 or 3");
  if (!(observation_point >= 0.0 && observation_point <= params.length))
    throw ValidationError("observation_point must lie in [0, L]");
  if (n_periods < 3) throw ValidationError("n_periods must be >= 3");
  if (samples_per_period < 64) throw ValidationError("samples_per_period must be >= 64");
  if (max_dt && !(*max_dt > 0.0)) throw ValidationError("max_dt must be > 0");
  if (model == HysteresisModel::Linear) Equilibrium{linear_base};
}

double loop_area(const std::vector<LoopSample>& samples) {
  if (samples.size() < 3) throw ValidationError("degenerate loop");
  // Shift to the first sample to limit cancellation for small loops far from
  // the origin.
  const double x0 = samples[0].input, y0 = samples[0].output;
  double twice = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& p = samples[i];
    const auto& q = samples[(i + 1) % samples.size()];
    twice += (p.input - x0) * (q.output - y0) - (q.input - x0) * (p.output - y0);
  }
  return 0.5 * std::abs(twice);
}

HysteresisLoop run_hysteresis(const HysteresisConfig& config, const MagnetizationField& m0,
                              const PhysicalParams& params, const ControlSpec& control) {
  params.validate();
  config.validate(params);

  PeriodicDrive drive{config.amplitude, config.omega, config.component};
  ControlSpec spec;
  spec.gain = config.controlled ? control.gain : 0.0;
  spec.target = control.target;
  spec.drive = drive;

  const double period = 2.0 * std::numbers::pi / config.omega;
  const double sample_dt = period / config.samples_per_period;
  const double gain = spec.gain;
  const double dt_limit = config.max_dt.value_or(max_stable_dt(m0.mesh(), params, gain, config.mass));
  const auto substeps = static_cast<std::size_t>(std::ceil(sample_dt / dt_limit));

  IntegratorOptions opts;
  opts.dt = sample_dt / static_cast<double>(substeps);
  opts.t_final = config.n_periods * period;
  opts.record_stride = substeps;
  opts.renormalize = false;
  opts.allow_large_dt = config.max_dt.has_value();
  opts.mass = config.mass;

  Trajectory traj;
  if (config.model == HysteresisModel::Nonlinear) {
    traj = integrate(m0, params, spec, opts);
  } else {
    traj = integrate_linear(LinearState{m0, Equilibrium(config.linear_base)}, params, spec, opts);
  }
  if (traj.failed) throw NumericalError(traj.message);

  const std::size_t per = static_cast<std::size_t>(config.samples_per_period);
  const std::size_t total = per * static_cast<std::size_t>(config.n_periods);
  if (traj.size() != total + 1)
    throw NumericalError("unexpected sample count " + std::to_string(traj.size()));

  HysteresisLoop loop;
  loop.omega = config.omega;
  loop.samples.reserve(per + 1);
  for (std::size_t j = total - per; j <= total; ++j) {
    const double t = static_cast<double>(j) * sample_dt;
    const double input = drive.value(t)[config.component - 1];
    const double output = traj.states[j].evaluate(config.observation_point)[config.component - 1];
    loop.samples.push_back({input, output});
  }
  loop.area = loop_area(loop.samples);
  return loop;
}

std::vector<HysteresisLoop> run_hysteresis_sweep(const HysteresisConfig& config,
                                                 const std::vector<double>& omegas,
                                                 const MagnetizationField& m0,
                                                 const PhysicalParams& params,
                                                 const ControlSpec& control, bool parallel) {
  std::vector<HysteresisConfig> configs;
  for (double w : omegas) {
    HysteresisConfig c = config;
    c.omega = w;
    c.validate(params);
    configs.push_back(c);
  }
  std::vector<HysteresisLoop> loops;
  if (!parallel) {
    for (const auto& c : configs) loops.push_back(run_hysteresis(c, m0, params, control));
    return loops;
  }
  std::vector<std::future<HysteresisLoop>> futures;
  for (const auto& c : configs)
    futures.push_back(std::async(std::launch::async, [&, c] {
      return run_hysteresis(c, m0, params, control);
    }));
  for (auto& f : futures) loops.push_back(f.get());
  return loops;
}

PersistenceVerdict persistence_test(const std::vector<HysteresisLoop>& loops, double threshold) {
  if (loops.size() < 2) throw ValidationError("persistence test needs at least two frequencies");
  for (std::size_t i = 1; i < loops.size(); ++i)
    if (!(loops[i].omega < loops[i - 1].omega))
      throw ValidationError("persistence test needs strictly decreasing omega");

  PersistenceVerdict v;
  v.threshold = threshold;
  for (const auto& l : loops) v.table.emplace_back(l.omega, l.area);
  const double first = loops.front().area, last = loops.back().area;
  if (first > 0.0)
    v.ratio = last / first;
  else
    v.ratio = last > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  v.persistent = last > 0.0 && v.ratio >= threshold;
  return v;
}

}  // namespace llc
