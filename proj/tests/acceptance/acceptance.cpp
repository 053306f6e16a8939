// Acceptance suite: one PASS/FAIL line per criterion. `--only N` runs a single
// criterion; the exit status is nonzero when any executed criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "llcontrol/diagnostics.hpp"
#include "llcontrol/hysteresis.hpp"
#include "llcontrol/integrator.hpp"
#include "llcontrol/spectral.hpp"
#include "llcontrol/verification.hpp"

using namespace llc;

namespace {

constexpr double kPi = std::numbers::pi;
const PhysicalParams kParams{0.02, 1.0};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

MagnetizationField sine_cosine(const Mesh& mesh) {
  return sample_field(mesh, [](double x) { return Vec3(std::sin(2 * kPi * x), std::cos(2 * kPi * x), 0); });
}

ControlSpec steer_to(const Vec3& r, double k = 0.5) {
  ControlSpec s;
  s.gain = k;
  s.target = Equilibrium(r);
  return s;
}

Trajectory fig4_run() {
  IntegratorOptions o;
  o.dt = 1e-3;
  o.t_final = 30.0;
  o.record_stride = 1;
  return integrate(sine_cosine(Mesh(12, 1.0)), kParams,
                   steer_to(Vec3(-1 / std::sqrt(2.0), 0, 1 / std::sqrt(2.0))), o);
}

Outcome criterion1() {
  std::mt19937_64 rng(1);
  const auto c = check_equilibrium_fidelity(Discretization(Mesh(12, 1.0)), kParams, 100, rng, 1e-13);
  return {c.pass, fmt("max |rhs| over 100 constant unit fields = %.3g (bound 1e-13)", c.value)};
}

Outcome criterion2() {
  const Mesh mesh(12, 1.0);
  IntegratorOptions o;
  o.dt = 1e-4;
  o.t_final = 10.0;
  o.record_stride = 10;
  auto worst = [](const Trajectory& t) {
    double d = 0.0;
    for (const auto& r : t.diagnostics) d = std::max(d, r.max_norm_drift);
    return t.failed ? INFINITY : d;
  };
  o.renormalize = true;
  const double with = worst(integrate(sine_cosine(mesh), kParams, std::nullopt, o));
  o.renormalize = false;
  const double without = worst(integrate(sine_cosine(mesh), kParams, std::nullopt, o));
  return {with <= 1e-12 && without <= 1e-3,
          fmt("max drift %.3g renormalized (bound 1e-12), %.3g free (bound 1e-3)", with, without)};
}

Outcome criterion3() {
  const auto t = fig4_run();
  if (t.failed) return {false, t.message};
  double worst = -INFINITY;
  for (std::size_t i = 1; i < t.size(); ++i)
    worst = std::max(worst, t.diagnostics[i].lyapunov - t.diagnostics[i - 1].lyapunov);
  return {worst <= 1e-10, fmt("k = 0.5 > 8 nu L^4 = %.3g; largest V increase %.3g over %.0f samples (slack 1e-10)",
                              gain_threshold(kParams), worst, static_cast<double>(t.size()))};
}

Outcome criterion4() {
  const auto t = fig4_run();
  if (t.failed) return {false, t.message};
  const double rate_bound = 2 * (0.5 - gain_threshold(kParams));
  const double h0 = std::pow(t.diagnostics[0].h1_distance_to_target, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i)
    worst = std::max(worst, std::pow(t.diagnostics[i].h1_distance_to_target, 2) /
                                (std::exp(-rate_bound * t.times[i]) * h0));
  const double rate = decay_rate_fit(t);
  return {worst <= 1.05 && rate >= rate_bound,
          fmt("max h1^2 / (e^{-0.68t} h1^2(0)) = %.4f (bound 1.05), fitted rate %.4f (bound %.2f)", worst,
              rate, rate_bound)};
}

Outcome criterion5() {
  const Mesh mesh(12, 1.0);
  const auto t = fig4_run();
  if (t.failed) return {false, t.message};
  const double steer = t.diagnostics.back().l2_distance_to_target;

  IntegratorOptions o;
  o.dt = 1e-3;
  o.t_final = 30.0;
  const auto settle = integrate(sine_cosine(mesh), kParams, std::nullopt, o);
  if (settle.failed) return {false, settle.message};
  auto state = settle.final_state();
  std::vector<double> finals;
  for (const Vec3& r : {Vec3(1, 0, 0), Vec3(0, 0, 1)}) {
    const auto ph = integrate(state, kParams, steer_to(r), o);
    if (ph.failed) return {false, ph.message};
    finals.push_back(ph.diagnostics.back().l2_distance_to_target);
    state = ph.final_state();
  }
  const bool ok = steer <= 1e-3 && finals[0] <= 1e-3 && finals[1] <= 1e-3;
  return {ok, fmt("final l2 to r1 %.3g; sequence r2 %.3g, r3 %.3g (bound 1e-3)", steer, finals[0], finals[1])};
}

Outcome criterion6() {
  const auto checks = check_spectrum(kParams, Equilibrium(Vec3(1, 0, 0)));
  bool ok = true;
  std::string d;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    d += c.name + fmt(" %.4g (bound %.4g)", c.value, c.threshold) + (c.pass ? "; " : " FAILED; ");
  }
  return {ok, d + "at 64 elements"};
}

Outcome criterion7() {
  const Mesh mesh(12, 1.0);
  const double k = 0.5;
  const Equilibrium base(Vec3(1, 0, 0));
  const auto spec = steer_to(Vec3(1, 0, 0), k);
  IntegratorOptions o;
  o.dt = 1e-3;
  o.t_final = 10.0;

  const auto constant = integrate_linear({MagnetizationField(mesh, Vec3(1.1, 0.2, -0.1)), base}, kParams, spec, o);
  if (constant.failed) return {false, constant.message};
  const double rate = decay_rate_fit(constant);

  // Nonconstant start: mixed cosine modes in all components.
  const auto z0 = sample_field(mesh, [](double x) {
    return Vec3(1.0 + 0.3 * std::cos(kPi * x), 0.4 * std::cos(2 * kPi * x), -0.2 + 0.5 * std::cos(3 * kPi * x));
  });
  const auto general = integrate_linear({z0, base}, kParams, spec, o);
  if (general.failed) return {false, general.message};
  const double d0 = std::pow(general.diagnostics[0].l2_distance_to_target, 2);
  double worst = 0.0;
  for (std::size_t i = 0; i < general.size(); ++i)
    worst = std::max(worst, std::pow(general.diagnostics[i].l2_distance_to_target, 2) /
                                (std::exp(-2 * k * general.times[i]) * d0));
  const bool ok = std::abs(rate - 2 * k) <= 0.02 * 2 * k && worst <= 1.05;
  return {ok, fmt("constant-perturbation rate %.5f (want 1.0 +- 2%%); max |z-r|^2 / (e^{-2kt}|z0-r|^2) = %.4f (bound 1.05)",
                  rate, worst)};
}

Outcome criterion8() {
  const Mesh mesh(5, 1.0);
  const std::vector<double> omegas{1.0, 0.1, 0.01, 0.001};
  const MagnetizationField m0(mesh, Vec3(1, 0, 0));
  HysteresisConfig h;
  h.component = 1;
  h.observation_point = 0.6;
  const auto free_loops = run_hysteresis_sweep(h, omegas, m0, kParams, ControlSpec{});
  const auto verdict = persistence_test(free_loops);

  h.controlled = true;
  h.omega = 0.001;
  const auto ctl = run_hysteresis(h, m0, kParams, steer_to(Vec3(1, 0, 0)));
  const double ratio = ctl.area / free_loops.back().area;
  return {verdict.persistent && ratio <= 0.05,
          fmt("uncontrolled area ratio w=0.001/w=1: %.4g (persistent if >= 0.1); controlled/uncontrolled at "
              "w=0.001: %.3g (bound 0.05)",
              verdict.ratio, ratio)};
}

Outcome criterion9() {
  const Mesh mesh(128, 1.0);
  const Discretization disc(mesh);
  std::mt19937_64 rng(20160101ULL);
  const std::vector<CheckResult> checks{check_cross_bound_sweep(mesh, 1000, rng),
                                        check_zero_integral_sweep(disc, 1000, rng),
                                        check_poincare_sweep(disc, 1000, rng)};
  bool ok = true;
  std::string d;
  for (const auto& c : checks) {
    ok = ok && c.pass;
    d += c.name + fmt(" %.3g <= %.3g; ", c.value, c.threshold);
  }
  return {ok, d + "1000 fields, 128 elements"};
}

Outcome criterion10() {
  const auto diffs = semilinear_differences(kParams, {16, 32, 64});
  const auto c = check_semilinear_order(kParams);
  return {c.pass, fmt("max |rhs - rhs_semilinear| = %.3g, %.3g, %.3g", diffs[0], diffs[1], diffs[2]) +
                      fmt(" at 16/32/64 elements; min order %.3f (want >= 1.8)", c.value)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                       criterion5, criterion6, criterion7, criterion8,
                                                       criterion9, criterion10};
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--only N]\n");
      return 2;
    }
  }
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  int failures = 0;
  for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) {
    if (only != 0 && n != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", n, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
