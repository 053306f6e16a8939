#include "llcontrol/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

namespace llc {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string where(const std::string& source, int line) {
  return line > 0 ? source + ":" + std::to_string(line) : source + ":override";
}

double parse_plain(const std::string& t) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ValidationError("not a number: '" + t + "'");
  }
  if (used != t.size()) throw ValidationError("not a number: '" + t + "'");
  return v;
}

}  // namespace

double parse_real(const std::string& token) {
  std::string t = trim(token);
  if (t.empty()) throw ValidationError("empty number");
  double sign = 1.0;
  if (t.find("sqrt(") != std::string::npos) {
    if (t[0] == '-' || t[0] == '+') {
      sign = t[0] == '-' ? -1.0 : 1.0;
      t = trim(t.substr(1));
    }
    double numerator = 1.0;
    const auto slash = t.find('/');
    std::string rest = t;
    if (slash != std::string::npos) {
      numerator = parse_plain(trim(t.substr(0, slash)));
      rest = trim(t.substr(slash + 1));
    }
    if (rest.rfind("sqrt(", 0) != 0 || rest.back() != ')')
      throw ValidationError("not a number: '" + token + "'");
    const double arg = parse_plain(trim(rest.substr(5, rest.size() - 6)));
    if (arg < 0.0) throw ValidationError("sqrt of a negative number");
    const double root = std::sqrt(arg);
    const double v = slash != std::string::npos ? numerator / root : root;
    return sign * v;
  }
  const double v = parse_plain(t);
  if (!std::isfinite(v)) throw ValidationError("number must be finite: '" + t + "'");
  return v;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

int parse_int(const std::string& t) {
  const double v = parse_plain(trim(t));
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError("not an integer: '" + t + "'");
  return static_cast<int>(v);
}

bool parse_bool(const std::string& t) {
  const std::string s = trim(t);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ValidationError("not a boolean: '" + t + "'");
}

Vec3 parse_vec3(const std::string& t) {
  const auto parts = split(t, ',');
  if (parts.size() != 3) throw ValidationError("expected three comma-separated numbers");
  return {parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
}

std::string format_vec3(const Vec3& v) {
  return format_real(v[0]) + ", " + format_real(v[1]) + ", " + format_real(v[2]);
}

std::vector<double> parse_real_list(const std::string& t) {
  std::vector<double> out;
  for (const auto& p : split(t, ',')) out.push_back(parse_real(p));
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& source) {
  KeyValueConfig kv;
  kv.source_ = source;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3)
        throw ConfigError(where(source, line) + ": malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where(source, line) + ": expected 'key = value', got '" + s + "'");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ConfigError(where(source, line) + ": missing key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (kv.entries_.count(full))
      throw ConfigError(where(source, line) + ": duplicate key '" + full + "' (first on line " +
                        std::to_string(kv.entries_[full].line) + ")");
    kv.entries_[full] = {trim(s.substr(eq + 1)), line};
  }
  return kv;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

KeyValueConfig KeyValueConfig::from_map(const std::map<std::string, std::string>& entries,
                                        const std::string& source) {
  KeyValueConfig kv;
  kv.source_ = source;
  for (const auto& [k, v] : entries) kv.entries_[k] = {v, 0};
  return kv;
}

void KeyValueConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must be key=value, got '" + assignment + "'");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)), 0);
}

void KeyValueConfig::set(const std::string& key, const std::string& value, int line) {
  entries_[key] = {value, line};
}

std::optional<ConfigEntry> KeyValueConfig::find(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Simulate: return "simulate";
    case ScenarioKind::Steer: return "steer";
    case ScenarioKind::SteerSequence: return "steer_sequence";
    case ScenarioKind::HysteresisSweep: return "hysteresis_sweep";
    case ScenarioKind::Spectrum: return "spectrum";
    case ScenarioKind::Verify: return "verify";
  }
  return "unknown";
}

ScenarioKind parse_kind(const std::string& s) {
  for (auto k : {ScenarioKind::Simulate, ScenarioKind::Steer, ScenarioKind::SteerSequence,
                 ScenarioKind::HysteresisSweep, ScenarioKind::Spectrum, ScenarioKind::Verify})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown scenario kind '" + s + "'");
}

MagnetizationField InitialCondition::sample(const Mesh& mesh) const {
  const double two_pi = 2.0 * std::numbers::pi;
  switch (kind) {
    case Kind::Uniform:
      return MagnetizationField(mesh, uniform);
    case Kind::SineCosine:
      return sample_field(mesh, [&](double x) {
        return Vec3(std::sin(two_pi * x), std::cos(two_pi * x), 0.0);
      });
    case Kind::CosineMode: {
      const double k = mode * std::numbers::pi / mesh.length();
      return sample_field(mesh, [&](double x) {
        Vec3 v = Vec3::Zero();
        v[component - 1] = std::cos(k * x);
        return v;
      });
    }
  }
  throw ValidationError("unknown initial condition");
}

std::string InitialCondition::to_string() const {
  switch (kind) {
    case Kind::Uniform: return "uniform:" + format_real(uniform[0]) + "," +
                               format_real(uniform[1]) + "," + format_real(uniform[2]);
    case Kind::SineCosine: return "sine_cosine";
    case Kind::CosineMode:
      return "cosine_mode:" + std::to_string(mode) + "," + std::to_string(component);
  }
  return "";
}

InitialCondition parse_initial_condition(const std::string& s) {
  const std::string t = trim(s);
  const auto colon = t.find(':');
  const std::string name = trim(t.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : t.substr(colon + 1);
  InitialCondition ic;
  if (name == "sine_cosine") {
    if (!trim(args).empty()) throw ValidationError("sine_cosine takes no parameters");
    ic.kind = InitialCondition::Kind::SineCosine;
  } else if (name == "uniform") {
    ic.kind = InitialCondition::Kind::Uniform;
    ic.uniform = parse_vec3(args);
    if (std::abs(ic.uniform.norm() - 1.0) > Equilibrium::kNormTolerance)
      throw ValidationError("uniform preset must be a unit vector, got " + llc::to_string(ic.uniform));
  } else if (name == "cosine_mode") {
    ic.kind = InitialCondition::Kind::CosineMode;
    const auto parts = split(args, ',');
    if (parts.size() != 2) throw ValidationError("cosine_mode expects n,component");
    ic.mode = parse_int(parts[0]);
    ic.component = parse_int(parts[1]);
    if (ic.mode < 0) throw ValidationError("cosine_mode n must be >= 0");
    if (ic.component < 1 || ic.component > 3)
      throw ValidationError("cosine_mode component must be 1, 2 or 3");
  } else {
    throw ValidationError("unknown initial condition preset '" + name + "'");
  }
  return ic;
}

namespace {

using Handler = std::function<void(ScenarioConfig&, const std::string&)>;

ControlSpec& control_of(ScenarioConfig& c) {
  if (!c.control) c.control = ControlSpec{};
  return *c.control;
}

PeriodicDrive& drive_of(ScenarioConfig& c) {
  auto& spec = control_of(c);
  if (!spec.drive) spec.drive = PeriodicDrive{};
  return *spec.drive;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"kind", [](ScenarioConfig& c, const std::string& v) { c.kind = parse_kind(v); }},
      {"physics.nu", [](ScenarioConfig& c, const std::string& v) { c.params.nu = parse_real(v); }},
      {"physics.length",
       [](ScenarioConfig& c, const std::string& v) { c.params.length = parse_real(v); }},
      {"physics.L", [](ScenarioConfig& c, const std::string& v) { c.params.length = parse_real(v); }},
      {"mesh.n_elements",
       [](ScenarioConfig& c, const std::string& v) { c.n_elements = parse_int(v); }},
      {"mesh.mass",
       [](ScenarioConfig& c, const std::string& v) {
         c.integrator.mass = parse_mass_treatment(trim(v));
         c.hysteresis.base.mass = c.integrator.mass;
       }},
      {"integrator.dt",
       [](ScenarioConfig& c, const std::string& v) { c.integrator.dt = parse_real(v); }},
      {"integrator.t_final",
       [](ScenarioConfig& c, const std::string& v) { c.integrator.t_final = parse_real(v); }},
      {"integrator.renormalize",
       [](ScenarioConfig& c, const std::string& v) {
         if (trim(v) == "auto")
           c.integrator.renormalize.reset();
         else
           c.integrator.renormalize = parse_bool(v);
       }},
      {"integrator.record_stride",
       [](ScenarioConfig& c, const std::string& v) {
         if (trim(v) == "auto") {
           c.integrator.record_stride.reset();
           return;
         }
         const int s = parse_int(v);
         if (s < 1) throw ValidationError("record_stride must be >= 1");
         c.integrator.record_stride = static_cast<std::size_t>(s);
       }},
      {"integrator.allow_large_dt",
       [](ScenarioConfig& c, const std::string& v) { c.integrator.allow_large_dt = parse_bool(v); }},
      {"control.gain",
       [](ScenarioConfig& c, const std::string& v) { control_of(c).gain = parse_real(v); }},
      {"control.target",
       [](ScenarioConfig& c, const std::string& v) {
         control_of(c).target = Equilibrium(parse_vec3(v));
       }},
      {"control.drive_amplitude",
       [](ScenarioConfig& c, const std::string& v) { drive_of(c).amplitude = parse_real(v); }},
      {"control.drive_omega",
       [](ScenarioConfig& c, const std::string& v) { drive_of(c).omega = parse_real(v); }},
      {"control.drive_component",
       [](ScenarioConfig& c, const std::string& v) { drive_of(c).component = parse_int(v); }},
      {"initial.ic",
       [](ScenarioConfig& c, const std::string& v) { c.initial = parse_initial_condition(v); }},
      {"output.dir", [](ScenarioConfig& c, const std::string& v) { c.output_dir = trim(v); }},
      {"sequence.settle_time",
       [](ScenarioConfig& c, const std::string& v) { c.sequence.settle_time = parse_real(v); }},
      {"sequence.phase_time",
       [](ScenarioConfig& c, const std::string& v) { c.sequence.phase_time = parse_real(v); }},
      {"sequence.targets",
       [](ScenarioConfig& c, const std::string& v) {
         c.sequence.targets.clear();
         for (const auto& t : split(v, ';')) {
           if (t.empty()) continue;
           c.sequence.targets.push_back(Equilibrium(parse_vec3(t)).vector());
         }
       }},
      {"hysteresis.omegas",
       [](ScenarioConfig& c, const std::string& v) { c.hysteresis.omegas = parse_real_list(v); }},
      {"hysteresis.amplitude",
       [](ScenarioConfig& c, const std::string& v) { c.hysteresis.base.amplitude = parse_real(v); }},
      {"hysteresis.component",
       [](ScenarioConfig& c, const std::string& v) { c.hysteresis.base.component = parse_int(v); }},
      {"hysteresis.observation_point",
       [](ScenarioConfig& c, const std::string& v) {
         c.hysteresis.base.observation_point = parse_real(v);
       }},
      {"hysteresis.n_periods",
       [](ScenarioConfig& c, const std::string& v) { c.hysteresis.base.n_periods = parse_int(v); }},
      {"hysteresis.samples_per_period",
       [](ScenarioConfig& c, const std::string& v) {
         c.hysteresis.base.samples_per_period = parse_int(v);
       }},
      {"hysteresis.controlled",
       [](ScenarioConfig& c, const std::string& v) { c.hysteresis.base.controlled = parse_bool(v); }},
      {"hysteresis.model",
       [](ScenarioConfig& c, const std::string& v) {
         const std::string m = trim(v);
         if (m == "nonlinear")
           c.hysteresis.base.model = HysteresisModel::Nonlinear;
         else if (m == "linear")
           c.hysteresis.base.model = HysteresisModel::Linear;
         else
           throw ValidationError("model must be 'nonlinear' or 'linear'");
       }},
      {"hysteresis.base",
       [](ScenarioConfig& c, const std::string& v) {
         c.hysteresis.base.linear_base = Equilibrium(parse_vec3(v)).vector();
       }},
      {"hysteresis.max_dt",
       [](ScenarioConfig& c, const std::string& v) {
         if (trim(v) == "auto")
           c.hysteresis.base.max_dt.reset();
         else
           c.hysteresis.base.max_dt = parse_real(v);
       }},
      {"hysteresis.threshold",
       [](ScenarioConfig& c, const std::string& v) { c.hysteresis.threshold = parse_real(v); }},
      {"hysteresis.parallel",
       [](ScenarioConfig& c, const std::string& v) { c.hysteresis.parallel = parse_bool(v); }},
      {"spectrum.base",
       [](ScenarioConfig& c, const std::string& v) {
         c.spectrum.base = Equilibrium(parse_vec3(v)).vector();
       }},
      {"spectrum.n_max",
       [](ScenarioConfig& c, const std::string& v) { c.spectrum.n_max = parse_int(v); }},
      {"spectrum.tolerance",
       [](ScenarioConfig& c, const std::string& v) { c.spectrum.tolerance = parse_real(v); }},
      {"verify.n_fields",
       [](ScenarioConfig& c, const std::string& v) { c.verify.n_fields = parse_int(v); }},
      {"verify.n_elements",
       [](ScenarioConfig& c, const std::string& v) { c.verify.n_elements = parse_int(v); }},
      {"verify.seed",
       [](ScenarioConfig& c, const std::string& v) {
         const double s = parse_plain(trim(v));
         if (s < 0 || s != std::floor(s)) throw ValidationError("seed must be a non-negative integer");
         c.verify.seed = static_cast<unsigned long long>(s);
       }},
  };
  return table;
}

}  // namespace

ScenarioConfig build_scenario(const KeyValueConfig& kv) {
  ScenarioConfig c;
  const auto& table = handlers();
  // `kind` first so later validation can depend on it.
  std::vector<std::pair<std::string, ConfigEntry>> ordered(kv.entries().begin(),
                                                           kv.entries().end());
  std::stable_partition(ordered.begin(), ordered.end(),
                        [](const auto& e) { return e.first == "kind"; });
  for (const auto& [key, entry] : ordered) {
    auto it = table.find(key);
    if (it == table.end())
      throw ConfigError(where(kv.source(), entry.line) + ": unknown key '" + key + "'");
    try {
      it->second(c, entry.value);
    } catch (const ValidationError& e) {
      throw ConfigError(where(kv.source(), entry.line) + ": " + key + ": " + e.what());
    }
  }

  auto fail = [&](const std::string& key, const std::string& msg) -> void {
    const auto e = kv.find(key);
    const std::string loc = e ? where(kv.source(), e->line) : kv.source();
    throw ConfigError(loc + ": " + key + ": " + msg);
  };
  auto guard = [&](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const ValidationError& e) {
      fail(key, e.what());
    }
  };

  guard("physics.nu", [&] { c.params.validate(); });
  guard("mesh.n_elements", [&] { (void)build_mesh(c.n_elements, c.params.length); });
  if (c.control) {
    if (!kv.find("control.gain") &&
        (c.kind == ScenarioKind::Steer || c.kind == ScenarioKind::SteerSequence))
      fail("control.gain", "required for " + to_string(c.kind));
    guard("control.gain", [&] { c.control->validate(); });
    const double threshold = gain_threshold(c.params);
    if (c.control->gain > 0.0 || kv.find("control.gain")) {
      if (c.control->gain <= threshold) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "k ≤ 8νL⁴ = %g; theorem bound not satisfied",
                      threshold);
        c.warnings.emplace_back(buf);
      }
    }
  }

  const Mesh mesh = build_mesh(c.n_elements, c.params.length);
  switch (c.kind) {
    case ScenarioKind::Simulate:
    case ScenarioKind::Steer:
    case ScenarioKind::SteerSequence: {
      if (c.kind != ScenarioKind::Simulate && !c.control)
        fail("control.gain", "required for " + to_string(c.kind));
      guard("integrator.dt", [&] { c.integrator.validate(); });
      if (c.kind == ScenarioKind::SteerSequence) {
        if (c.sequence.targets.empty()) fail("sequence.targets", "at least one target required");
        if (!(c.sequence.settle_time >= 0.0)) fail("sequence.settle_time", "must be >= 0");
        if (!(c.sequence.phase_time > 0.0)) fail("sequence.phase_time", "must be > 0");
        if (c.integrator.dt > c.sequence.phase_time) fail("integrator.dt", "exceeds phase_time");
      }
      const double gain = c.control ? c.control->gain : 0.0;
      const double limit = max_stable_dt(mesh, c.params, gain, c.integrator.mass);
      if (!c.integrator.allow_large_dt && c.integrator.dt > limit)
        fail("integrator.dt", "dt too large for mesh (limit " + format_real(limit) +
                                  "); pass --allow-large-dt to override");
      break;
    }
    case ScenarioKind::HysteresisSweep: {
      if (c.hysteresis.base.controlled && !c.control)
        fail("hysteresis.controlled", "controlled sweep needs control.gain and control.target");
      auto& om = c.hysteresis.omegas;
      for (std::size_t i = 0; i < om.size(); ++i) {
        HysteresisConfig h = c.hysteresis.base;
        h.omega = om[i];
        guard("hysteresis.omegas", [&] { h.validate(c.params); });
        if (i > 0 && !(om[i] < om[i - 1])) fail("hysteresis.omegas", "must be strictly decreasing");
      }
      if (!(c.hysteresis.threshold > 0.0)) fail("hysteresis.threshold", "must be > 0");
      break;
    }
    case ScenarioKind::Spectrum:
      if (c.spectrum.n_max < 0) fail("spectrum.n_max", "must be >= 0");
      if (!(c.spectrum.tolerance > 0.0)) fail("spectrum.tolerance", "must be > 0");
      break;
    case ScenarioKind::Verify:
      if (c.verify.n_fields < 1) fail("verify.n_fields", "must be >= 1");
      if (c.verify.n_elements < 16) fail("verify.n_elements", "must be >= 16");
      break;
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
  KeyValueConfig kv = KeyValueConfig::load(path);
  for (const auto& o : overrides) kv.apply_override(o);
  return build_scenario(kv);
}

std::map<std::string, std::string> ScenarioConfig::resolved() const {
  std::map<std::string, std::string> r;
  r["kind"] = to_string(kind);
  r["physics.nu"] = format_real(params.nu);
  r["physics.length"] = format_real(params.length);
  r["mesh.n_elements"] = std::to_string(n_elements);
  r["mesh.mass"] = to_string(integrator.mass);
  r["integrator.dt"] = format_real(integrator.dt);
  r["integrator.t_final"] = format_real(integrator.t_final);
  r["integrator.renormalize"] =
      integrator.renormalize ? (*integrator.renormalize ? "true" : "false") : "auto";
  r["integrator.record_stride"] =
      integrator.record_stride ? std::to_string(*integrator.record_stride) : "auto";
  r["integrator.allow_large_dt"] = integrator.allow_large_dt ? "true" : "false";
  if (control) {
    r["control.gain"] = format_real(control->gain);
    r["control.target"] = format_vec3(control->target.vector());
    if (control->drive) {
      r["control.drive_amplitude"] = format_real(control->drive->amplitude);
      r["control.drive_omega"] = format_real(control->drive->omega);
      r["control.drive_component"] = std::to_string(control->drive->component);
    }
  }
  r["initial.ic"] = initial.to_string();
  r["output.dir"] = output_dir.string();
  r["sequence.settle_time"] = format_real(sequence.settle_time);
  r["sequence.phase_time"] = format_real(sequence.phase_time);
  std::string targets;
  for (std::size_t i = 0; i < sequence.targets.size(); ++i)
    targets += (i ? "; " : "") + format_vec3(sequence.targets[i]);
  r["sequence.targets"] = targets;
  std::string omegas;
  for (std::size_t i = 0; i < hysteresis.omegas.size(); ++i)
    omegas += (i ? ", " : "") + format_real(hysteresis.omegas[i]);
  r["hysteresis.omegas"] = omegas;
  const auto& h = hysteresis.base;
  r["hysteresis.amplitude"] = format_real(h.amplitude);
  r["hysteresis.component"] = std::to_string(h.component);
  r["hysteresis.observation_point"] = format_real(h.observation_point);
  r["hysteresis.n_periods"] = std::to_string(h.n_periods);
  r["hysteresis.samples_per_period"] = std::to_string(h.samples_per_period);
  r["hysteresis.controlled"] = h.controlled ? "true" : "false";
  r["hysteresis.model"] = h.model == HysteresisModel::Linear ? "linear" : "nonlinear";
  r["hysteresis.base"] = format_vec3(h.linear_base);
  r["hysteresis.max_dt"] = h.max_dt ? format_real(*h.max_dt) : "auto";
  r["hysteresis.threshold"] = format_real(hysteresis.threshold);
  r["hysteresis.parallel"] = hysteresis.parallel ? "true" : "false";
  r["spectrum.base"] = format_vec3(spectrum.base);
  r["spectrum.n_max"] = std::to_string(spectrum.n_max);
  r["spectrum.tolerance"] = format_real(spectrum.tolerance);
  r["verify.n_fields"] = std::to_string(verify.n_fields);
  r["verify.n_elements"] = std::to_string(verify.n_elements);
  r["verify.seed"] = std::to_string(verify.seed);
  return r;
}

}  // namespace llc
