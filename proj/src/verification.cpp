#include "llcontrol/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace llc {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_norm(const MagnetizationField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, f[i].lpNorm<Eigen::Infinity>());
  return m;
}

}  // namespace

Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  for (;;) {
    const Vec3 v(n(rng), n(rng), n(rng));
    const double len = v.norm();
    if (len > 1e-3) return v / len;
  }
}

MagnetizationField random_cosine_field(const Mesh& mesh, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  const double l = mesh.length();
  for (;;) {
    const Vec3 bias = 2.0 * Vec3(n(rng), n(rng), n(rng));
    Vec3 c[4];
    for (auto& v : c) v = Vec3(n(rng), n(rng), n(rng));
    std::vector<Vec3> values(mesh.n_nodes());
    bool ok = true;
    for (std::size_t i = 0; i < values.size() && ok; ++i) {
      const double x = mesh.node(i);
      Vec3 v = bias;
      for (int j = 0; j < 4; ++j) v += c[j] * std::cos(j * kPi * x / l);
      ok = v.norm() >= 0.1;
      values[i] = v.normalized();
    }
    if (ok) return MagnetizationField(mesh, std::move(values));
  }
}

MagnetizationField planar_test_field(const Mesh& mesh) {
  const double l = mesh.length();
  return sample_field(mesh, [l](double x) {
    const double s = x / l;
    const double g = kPi * s * s * (3.0 - 2.0 * s);
    return Vec3(std::cos(g), std::sin(g), 0.0);
  });
}

MagnetizationField spatial_test_field(const Mesh& mesh) {
  const double l = mesh.length();
  return sample_field(mesh, [l](double x) {
    const double s = kPi * x / l;
    return Vec3(std::cos(s), 0.5 * std::cos(2.0 * s) + 0.2, 0.6 + 0.4 * std::cos(3.0 * s))
        .normalized();
  });
}

CheckResult check_equilibrium_fidelity(const Discretization& disc, const PhysicalParams& params,
                                       int trials, std::mt19937_64& rng, double tol) {
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const MagnetizationField f(disc.mesh(), random_unit_vector(rng));
    worst = std::max(worst, max_norm(rhs(f, disc, params, nullptr, 0.0)));
  }
  return {"equilibrium_fidelity", worst, tol, worst <= tol,
          std::to_string(trials) + " random unit constants"};
}

CheckResult check_cross_bound_sweep(const Mesh& mesh, int trials, std::mt19937_64& rng) {
  double worst = -std::numeric_limits<double>::infinity();
  std::normal_distribution<double> n;
  for (int k = 0; k < trials; ++k) {
    // Unconstrained fields: the lemma needs only |a| = 1.
    std::vector<Vec3> v(mesh.n_nodes());
    const MagnetizationField base = random_cosine_field(mesh, rng);
    const double scale = 1.0 + std::abs(n(rng));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * base[i] + 0.3 * Vec3(n(rng), n(rng), n(rng));
    const auto [lhs, rhs_value] =
        check_cross_bound(Equilibrium(random_unit_vector(rng)), MagnetizationField(mesh, v));
    worst = std::max(worst, lhs - rhs_value);
  }
  return {"cross_bound", worst, 1e-12, worst <= 1e-12,
          "max(|a x m| - |m|) over " + std::to_string(trials) + " fields"};
}

double zero_integral_tolerance(const Mesh& mesh) {
  static const double c = [] {
    const Mesh cal(32, 1.0);
    const Discretization disc(cal, MassTreatment::Consistent);
    const double v =
        check_lemma_zero_integral(spatial_test_field(cal), disc, Vec3(0.0, 0.6, 0.8));
    return 10.0 * std::abs(v) / (cal.h() * cal.h());
  }();
  // The calibration mesh has unit length; rescale h to it.
  const double h = mesh.h() / mesh.length();
  return c * h * h + 1e-12;
}

CheckResult check_zero_integral_sweep(const Discretization& disc, int trials,
                                      std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < trials; ++k) {
    const MagnetizationField f = random_cosine_field(disc.mesh(), rng);
    const Vec3 r = random_unit_vector(rng);
    worst = std::max(worst, std::abs(check_lemma_zero_integral(f, disc, r)));
  }
  const double tol = zero_integral_tolerance(disc.mesh());
  return {"zero_integral", worst, tol, worst <= tol,
          "|integral (m - r).(m x m_xx)|, " + to_string(disc.mass_treatment()) + " mass"};
}

CheckResult check_poincare_sweep(const Discretization& disc, int trials, std::mt19937_64& rng) {
  const double l = disc.mesh().length();
  const double bound = 4.0 * l * l + 0.05;
  double worst = 0.0;
  int skipped = 0;
  for (int k = 0; k < trials; ++k) {
    const double ratio = check_lemma_poincare_cross(random_cosine_field(disc.mesh(), rng), disc);
    if (std::isinf(ratio)) {
      ++skipped;
      continue;
    }
    worst = std::max(worst, ratio);
  }
  return {"poincare_cross", worst, bound, worst <= bound,
          "|m x m_x| / |m x m_xx|; " + std::to_string(skipped) + " degenerate fields skipped"};
}

namespace {

// Five smallest nonzero analytic eigenvalues and their matched discrete values.
std::vector<MatchedMode> smallest_matches(const PhysicalParams& params, const Equilibrium& base,
                                          int n_elements) {
  const Mesh mesh(n_elements, params.length);
  const auto discrete = discrete_eigenvalues(assemble_linear_operator(base, params, mesh));
  const auto match = match_spectrum(analytic_eigenvalues(params, 4), discrete, 0.1);
  std::vector<EigenvalueFamily> analytic = analytic_eigenvalues(params, 4);
  std::erase_if(analytic, [](const auto& f) { return f.label == FamilyLabel::Zero; });
  std::stable_sort(analytic.begin(), analytic.end(), [](const auto& a, const auto& b) {
    return std::abs(a.value) < std::abs(b.value);
  });
  analytic.resize(5);

  std::vector<MatchedMode> out;
  for (const auto& fam : analytic) {
    MatchedMode m{fam, {std::numeric_limits<double>::quiet_NaN(), 0.0},
                  std::numeric_limits<double>::infinity()};
    for (const auto& mm : match.matched)
      if (mm.analytic.label == fam.label && mm.analytic.n == fam.n) m = mm;
    out.push_back(m);
  }
  return out;
}

}  // namespace

SpectrumReport spectrum_report(const PhysicalParams& params, const Equilibrium& base,
                               int coarse_elements, int fine_elements) {
  SpectrumReport rep;
  const Mesh fine(fine_elements, params.length);
  const auto ev = discrete_eigenvalues(assemble_linear_operator(base, params, fine));
  for (const auto& v : ev)
    if (std::abs(v) <= 1e-10) ++rep.zero_count;
  for (std::size_t i = 0; i < 3 && i < ev.size(); ++i)
    rep.zero_max = std::max(rep.zero_max, std::abs(ev[i]));

  const auto coarse_m = smallest_matches(params, base, coarse_elements);
  const auto fine_m = smallest_matches(params, base, fine_elements);
  for (std::size_t i = 0; i < fine_m.size(); ++i) {
    rep.rel_errors.push_back(fine_m[i].relative_error);
    rep.orders.push_back(std::log2(coarse_m[i].relative_error / fine_m[i].relative_error));
  }
  return rep;
}

std::vector<CheckResult> check_spectrum(const PhysicalParams& params, const Equilibrium& base) {
  const SpectrumReport rep = spectrum_report(params, base);
  std::vector<CheckResult> out;
  out.push_back({"spectrum_zero_multiplicity", static_cast<double>(rep.zero_count), 3.0,
                 rep.zero_count == 3, fmt("largest |lambda| among the zero cluster %.3g", rep.zero_max)});
  const double worst_err = *std::max_element(rep.rel_errors.begin(), rep.rel_errors.end());
  out.push_back({"spectrum_relative_error", worst_err, 0.02, worst_err <= 0.02,
                 "five smallest nonzero modes, 64 elements"});
  const auto [lo, hi] = std::minmax_element(rep.orders.begin(), rep.orders.end());
  const bool order_ok = *lo >= 1.8 && *hi <= 2.2;
  out.push_back({"spectrum_convergence_order", *lo, 1.8, order_ok,
                 fmt("observed orders in [%.4f, %.4f], 32 -> 64 elements", *lo, *hi)});
  return out;
}

std::vector<double> semilinear_differences(const PhysicalParams& params,
                                           const std::vector<int>& n_elements,
                                           MassTreatment mass) {
  std::vector<double> out;
  for (int n : n_elements) {
    const Mesh mesh(n, params.length);
    const Discretization disc(mesh, mass);
    const MagnetizationField f = planar_test_field(mesh);
    const auto a = rhs(f, disc, params, nullptr, 0.0);
    const auto b = rhs_semilinear(f, disc, params, nullptr, 0.0);
    double d = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) d = std::max(d, (a[i] - b[i]).lpNorm<Eigen::Infinity>());
    out.push_back(d);
  }
  return out;
}

CheckResult check_semilinear_order(const PhysicalParams& params, MassTreatment mass) {
  const auto d = semilinear_differences(params, {16, 32, 64}, mass);
  const double o1 = std::log2(d[0] / d[1]), o2 = std::log2(d[1] / d[2]);
  const double worst = std::min(o1, o2);
  return {"semilinear_order", worst, 1.8, worst >= 1.8 && d[2] < d[1] && d[1] < d[0],
          fmt("orders %.4f then %.4f over 16 -> 32 -> 64 elements", o1, o2)};
}

std::vector<CheckResult> run_verification(const PhysicalParams& params,
                                          const VerificationOptions& options) {
  params.validate();
  if (options.n_fields < 1) throw ValidationError("n_fields must be >= 1");
  std::mt19937_64 rng(options.seed);
  const Mesh mesh(options.n_elements, params.length);
  const Discretization disc(mesh, options.mass);

  std::vector<CheckResult> out;
  out.push_back(check_equilibrium_fidelity(disc, params, 100, rng));
  out.push_back(check_cross_bound_sweep(mesh, options.n_fields, rng));
  out.push_back(check_zero_integral_sweep(disc, options.n_fields, rng));
  out.push_back(check_poincare_sweep(disc, options.n_fields, rng));
  for (auto& c : check_spectrum(params, Equilibrium(options.spectrum_base))) out.push_back(c);
  out.push_back(check_semilinear_order(params, options.mass));
  return out;
}

}  // namespace llc
