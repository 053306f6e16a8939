#include "llcontrol/scenario.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "llcontrol/diagnostics.hpp"
#include "llcontrol/hysteresis.hpp"
#include "llcontrol/integrator.hpp"
#include "llcontrol/spectral.hpp"
#include "llcontrol/verification.hpp"

namespace llc {

const char* toolkit_version() { return LLCONTROL_VERSION; }

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::ofstream open_csv(const fs::path& path, bool append) {
  std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  return out;
}

std::string vec_string(const Vec3& v) {
  return format_real(v[0]) + "," + format_real(v[1]) + "," + format_real(v[2]);
}

void add_output(ScenarioResult& r, const fs::path& p) {
  for (const auto& q : r.outputs)
    if (q == p) return;
  r.outputs.push_back(p);
}

// Largest sample-to-sample increase of the recorded Lyapunov value.
double max_lyapunov_increase(const Trajectory& t) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < t.size(); ++i)
    worst = std::max(worst, t.diagnostics[i].lyapunov - t.diagnostics[i - 1].lyapunov);
  return t.size() > 1 ? worst : 0.0;
}

void summarize_trajectory(const Trajectory& t, const std::string& prefix, ScenarioResult& r) {
  if (t.size() == 0) return;
  const auto& last = t.diagnostics.back();
  r.summary[prefix + "final_time"] = last.t;
  r.summary[prefix + "final_l2"] = last.l2_distance_to_target;
  r.summary[prefix + "final_h1"] = last.h1_distance_to_target;
  r.summary[prefix + "final_lyapunov"] = last.lyapunov;
  r.summary[prefix + "final_energy"] = last.exchange_energy;
  double drift = 0.0;
  for (const auto& d : t.diagnostics) drift = std::max(drift, d.max_norm_drift);
  r.summary[prefix + "max_norm_drift"] = drift;
  r.summary[prefix + "max_lyapunov_increase"] = max_lyapunov_increase(t);
  try {
    r.summary[prefix + "decay_rate"] = decay_rate_fit(t);
  } catch (const ValidationError&) {
    // too few samples, or the distance reached zero
  }
}

struct Phase {
  std::string name;
  std::optional<ControlSpec> control;
  double duration;
};

void run_trajectory_kind(const ScenarioConfig& c, ScenarioResult& r) {
  const Mesh mesh = build_mesh(c.n_elements, c.params.length);
  const fs::path traj_csv = c.output_dir / "trajectory.csv";
  const fs::path diag_csv = c.output_dir / "diagnostics.csv";

  std::vector<Phase> phases;
  if (c.kind == ScenarioKind::SteerSequence) {
    if (c.sequence.settle_time > 0.0) phases.push_back({"settle", std::nullopt, c.sequence.settle_time});
    for (std::size_t i = 0; i < c.sequence.targets.size(); ++i) {
      ControlSpec spec = *c.control;
      spec.target = Equilibrium(c.sequence.targets[i]);
      phases.push_back({"target_" + std::to_string(i + 1), spec, c.sequence.phase_time});
    }
  } else {
    phases.push_back({to_string(c.kind), c.control, c.integrator.t_final});
  }

  MagnetizationField state = c.initial.sample(mesh);
  double offset = 0.0;
  bool first = true;
  for (std::size_t p = 0; p < phases.size(); ++p) {
    IntegratorOptions opts = c.integrator;
    opts.t_final = phases[p].duration;
    Trajectory t = integrate(state, c.params, phases[p].control, opts);
    for (const auto& w : t.warnings) r.warnings.push_back(phases[p].name + ": " + w);

    // Later phases start where the previous one ended; skip the duplicate row.
    Trajectory shown = t;
    if (!first && shown.size() > 0) {
      shown.times.erase(shown.times.begin());
      shown.states.erase(shown.states.begin());
      shown.diagnostics.erase(shown.diagnostics.begin());
    }
    write_trajectory_csv(traj_csv, shown, offset, !first);
    write_diagnostics_csv(diag_csv, shown, offset, !first);
    add_output(r, traj_csv);
    add_output(r, diag_csv);

    PhaseSummary ps;
    ps.name = phases[p].name;
    ps.t_start = offset;
    ps.t_end = offset + (t.size() ? t.times.back() : 0.0);
    if (phases[p].control) ps.target = phases[p].control->target.vector();
    ps.final_l2 = t.size() ? t.diagnostics.back().l2_distance_to_target : 0.0;
    ps.failed = t.failed;
    r.phases.push_back(ps);
    summarize_trajectory(t, phases.size() > 1 ? ps.name + "." : "", r);

    if (t.failed) {
      r.status = RunStatus::NumericalFailure;
      r.message = ps.name + ": " + t.message;
      return;
    }
    state = t.final_state();
    offset = ps.t_end;
    first = false;
  }
}

void run_hysteresis_kind(const ScenarioConfig& c, ScenarioResult& r) {
  const Mesh mesh = build_mesh(c.n_elements, c.params.length);
  const MagnetizationField m0 = c.initial.sample(mesh);
  const ControlSpec control = c.control.value_or(ControlSpec{});
  const auto loops = run_hysteresis_sweep(c.hysteresis.base, c.hysteresis.omegas, m0, c.params,
                                          control, c.hysteresis.parallel);

  std::string verdict = "n/a";
  if (loops.size() >= 2) {
    const PersistenceVerdict v = persistence_test(loops, c.hysteresis.threshold);
    verdict = v.persistent ? "persistent" : "not_persistent";
    r.summary["area_ratio"] = v.ratio;
    r.summary["persistent"] = v.persistent ? 1.0 : 0.0;
  }

  const fs::path loops_csv = c.output_dir / "loops.csv";
  auto out = open_csv(loops_csv, false);
  out << "omega,input,output,sample_index\n";
  for (const auto& l : loops)
    for (std::size_t i = 0; i < l.samples.size(); ++i)
      out << format_real(l.omega) << ',' << format_real(l.samples[i].input) << ','
          << format_real(l.samples[i].output) << ',' << i << '\n';
  add_output(r, loops_csv);

  const fs::path summary_csv = c.output_dir / "summary.csv";
  auto sum = open_csv(summary_csv, false);
  sum << "omega,area,verdict\n";
  for (const auto& l : loops) {
    sum << format_real(l.omega) << ',' << format_real(l.area) << ',' << verdict << '\n';
    char key[48];
    std::snprintf(key, sizeof key, "area@%.6g", l.omega);
    r.summary[key] = l.area;
  }
  add_output(r, summary_csv);
}

void run_spectrum_kind(const ScenarioConfig& c, ScenarioResult& r) {
  const Mesh mesh = build_mesh(c.n_elements, c.params.length);
  const Equilibrium base(c.spectrum.base);
  const auto discrete = discrete_eigenvalues(assemble_linear_operator(base, c.params, mesh));
  const auto analytic = analytic_eigenvalues(c.params, c.spectrum.n_max);
  const SpectrumMatch m = match_spectrum(analytic, discrete, c.spectrum.tolerance);

  const fs::path path = c.output_dir / "spectrum.csv";
  auto out = open_csv(path, false);
  out << "status,family,n,analytic_re,analytic_im,discrete_re,discrete_im,relative_error\n";
  for (const auto& mm : m.matched)
    out << "matched," << to_string(mm.analytic.label) << ',' << mm.analytic.n << ','
        << format_real(mm.analytic.value.real()) << ',' << format_real(mm.analytic.value.imag())
        << ',' << format_real(mm.discrete.real()) << ',' << format_real(mm.discrete.imag()) << ','
        << format_real(mm.relative_error) << '\n';
  for (const auto& a : m.unmatched_analytic)
    out << "unmatched," << to_string(a.label) << ',' << a.n << ',' << format_real(a.value.real())
        << ',' << format_real(a.value.imag()) << ",,,\n";
  for (const auto& d : m.surplus_discrete)
    out << "surplus,,,,," << format_real(d.real()) << ',' << format_real(d.imag()) << ",\n";
  add_output(r, path);

  r.summary["matched"] = static_cast<double>(m.matched.size());
  r.summary["unmatched_analytic"] = static_cast<double>(m.unmatched_analytic.size());
  r.summary["surplus_discrete"] = static_cast<double>(m.surplus_discrete.size());
}

void run_verify_kind(const ScenarioConfig& c, ScenarioResult& r) {
  VerificationOptions opts;
  opts.n_fields = c.verify.n_fields;
  opts.n_elements = c.verify.n_elements;
  opts.seed = c.verify.seed;
  opts.spectrum_base = c.spectrum.base;
  opts.mass = c.integrator.mass;
  const auto checks = run_verification(c.params, opts);

  const fs::path path = c.output_dir / "verify_summary.csv";
  auto out = open_csv(path, false);
  out << "check,value,threshold,pass,detail\n";
  int failed = 0;
  for (const auto& ch : checks) {
    out << ch.name << ',' << format_real(ch.value) << ',' << format_real(ch.threshold) << ','
        << (ch.pass ? "PASS" : "FAIL") << ",\"" << ch.detail << "\"\n";
    r.summary[ch.name] = ch.value;
    if (!ch.pass) ++failed;
  }
  add_output(r, path);
  if (failed > 0) {
    r.status = RunStatus::NumericalFailure;
    r.message = std::to_string(failed) + " verification check(s) failed";
  }
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::Invalid: return "invalid";
    case RunStatus::NumericalFailure: return "failed";
  }
  return "unknown";
}

json number(double v) { return std::isfinite(v) ? json(v) : json(format_real(v)); }

void write_manifest(const ScenarioConfig& c, const ScenarioResult& r) {
  json j;
  j["toolkit"] = "llcontrol";
  j["version"] = toolkit_version();
  j["kind"] = to_string(c.kind);
  j["status"] = status_name(r.status);
  j["message"] = r.message;
  j["wall_time_s"] = r.wall_time_s;
  j["config"] = c.resolved();
  j["warnings"] = r.warnings;
  json outputs = json::array();
  for (const auto& p : r.outputs) outputs.push_back(p.filename().string());
  j["outputs"] = outputs;
  json phases = json::array();
  for (const auto& p : r.phases) {
    json ph;
    ph["name"] = p.name;
    ph["t_start"] = p.t_start;
    ph["t_end"] = p.t_end;
    ph["target"] = p.target ? json(std::vector<double>{(*p.target)[0], (*p.target)[1], (*p.target)[2]})
                            : json(nullptr);
    ph["final_l2"] = number(p.final_l2);
    ph["failed"] = p.failed;
    phases.push_back(ph);
  }
  j["phases"] = phases;
  json summary = json::object();
  for (const auto& [k, v] : r.summary) summary[k] = number(v);
  j["summary"] = summary;

  std::ofstream out(c.output_dir / "manifest.json");
  if (!out) throw ValidationError("cannot write manifest in " + c.output_dir.string());
  out << j.dump(2) << '\n';
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& traj, double t_offset,
                          bool append) {
  auto out = open_csv(path, append);
  if (!append) out << "t,node_index,x,m1,m2,m3\n";
  for (std::size_t s = 0; s < traj.size(); ++s) {
    const auto& f = traj.states[s];
    const std::string t = format_real(traj.times[s] + t_offset);
    for (std::size_t i = 0; i < f.size(); ++i)
      out << t << ',' << i << ',' << format_real(f.mesh().node(i)) << ',' << vec_string(f[i])
          << '\n';
  }
}

void write_diagnostics_csv(const fs::path& path, const Trajectory& traj, double t_offset,
                           bool append) {
  auto out = open_csv(path, append);
  if (!append) out << "t,l2_dist,h1_dist,lyapunov,norm_drift,energy\n";
  for (const auto& d : traj.diagnostics)
    out << format_real(d.t + t_offset) << ',' << format_real(d.l2_distance_to_target) << ','
        << format_real(d.h1_distance_to_target) << ',' << format_real(d.lyapunov) << ','
        << format_real(d.max_norm_drift) << ',' << format_real(d.exchange_energy) << '\n';
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult r;
  r.warnings = config.warnings;
  fs::create_directories(config.output_dir);
  try {
    switch (config.kind) {
      case ScenarioKind::Simulate:
      case ScenarioKind::Steer:
      case ScenarioKind::SteerSequence: run_trajectory_kind(config, r); break;
      case ScenarioKind::HysteresisSweep: run_hysteresis_kind(config, r); break;
      case ScenarioKind::Spectrum: run_spectrum_kind(config, r); break;
      case ScenarioKind::Verify: run_verify_kind(config, r); break;
    }
  } catch (const NumericalError& e) {
    r.status = RunStatus::NumericalFailure;
    r.message = e.what();
  } catch (const ValidationError& e) {
    r.status = RunStatus::Invalid;
    r.message = e.what();
  }
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  add_output(r, config.output_dir / "manifest.json");
  write_manifest(config, r);
  return r;
}

KeyValueConfig manifest_config(const fs::path& manifest) {
  std::ifstream in(manifest);
  if (!in) throw ConfigError("cannot open manifest " + manifest.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(manifest.string() + ": malformed manifest: " + e.what());
  }
  if (!j.contains("config") || !j["config"].is_object())
    throw ConfigError(manifest.string() + ": manifest has no config object");
  std::map<std::string, std::string> entries;
  for (const auto& [k, v] : j["config"].items()) {
    if (!v.is_string()) throw ConfigError(manifest.string() + ": config value for " + k + " is not a string");
    entries[k] = v.get<std::string>();
  }
  return KeyValueConfig::from_map(entries, manifest.string());
}

ScenarioResult replay_manifest(const fs::path& manifest, const fs::path& output_dir) {
  KeyValueConfig kv = manifest_config(manifest);
  if (!output_dir.empty()) kv.set("output.dir", output_dir.string());
  return run_scenario(build_scenario(kv));
}

}  // namespace llc
