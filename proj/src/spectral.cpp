#include "llcontrol/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace llc {

std::string to_string(FamilyLabel label) {
  switch (label) {
    case FamilyLabel::Zero: return "zero";
    case FamilyLabel::Lambda2Plus: return "lambda2_plus";
    case FamilyLabel::Lambda2Minus: return "lambda2_minus";
    case FamilyLabel::Lambda3: return "lambda3";
    case FamilyLabel::Lambda4Plus: return "lambda4_plus";
    case FamilyLabel::Lambda4Minus: return "lambda4_minus";
    case FamilyLabel::Lambda5: return "lambda5";
  }
  return "unknown";
}

std::vector<EigenvalueFamily> analytic_eigenvalues(const PhysicalParams& params, int n_max) {
  params.validate();
  if (n_max < 0) throw ValidationError("n_max must be >= 0");
  const double pi2_over_l2 = std::numbers::pi * std::numbers::pi / (params.length * params.length);
  const double nu = params.nu;

  std::vector<EigenvalueFamily> out;
  out.push_back({FamilyLabel::Zero, 0, {0.0, 0.0}});
  for (int n = 0; n <= n_max; ++n) {
    const double odd = (1.0 + 2.0 * n) * (1.0 + 2.0 * n) * pi2_over_l2;
    out.push_back({FamilyLabel::Lambda2Plus, n, {-odd * nu, odd}});
    out.push_back({FamilyLabel::Lambda2Minus, n, {-odd * nu, -odd}});
    out.push_back({FamilyLabel::Lambda3, n, {-odd * nu, 0.0}});
    if (n == 0) continue;
    const double even = (2.0 * n) * (2.0 * n) * pi2_over_l2;
    out.push_back({FamilyLabel::Lambda4Plus, n, {-even * nu, even}});
    out.push_back({FamilyLabel::Lambda4Minus, n, {-even * nu, -even}});
    out.push_back({FamilyLabel::Lambda5, n, {-even * nu, 0.0}});
  }
  return out;
}

Eigen::Matrix3d cross_matrix(const Vec3& a) {
  Eigen::Matrix3d c;
  c << 0.0, -a[2], a[1],
       a[2], 0.0, -a[0],
       -a[1], a[0], 0.0;
  return c;
}

namespace {

Eigen::MatrixXd dense(const TridiagonalMatrix& t) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = std::max<Eigen::Index>(0, i - 1); j <= std::min(n - 1, i + 1); ++j)
      d(i, j) = t.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  return d;
}

Eigen::MatrixXd kron(const Eigen::Matrix3d& a, const Eigen::MatrixXd& b) {
  const Eigen::Index n = b.rows();
  Eigen::MatrixXd out(3 * n, 3 * n);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.block(i * n, j * n, n, n) = a(i, j) * b;
  return out;
}

}  // namespace

LinearOperator assemble_linear_operator(const Equilibrium& a, const PhysicalParams& params,
                                        const Mesh& mesh, MassTreatment mass) {
  params.validate();
  const Eigen::MatrixXd m = dense(mass == MassTreatment::Lumped ? assemble_lumped_mass(mesh)
                                                                : assemble_mass(mesh));
  const Eigen::MatrixXd k = dense(assemble_stiffness(mesh));
  const Eigen::Matrix3d coupling = params.nu * Eigen::Matrix3d::Identity() + cross_matrix(a.vector());

  LinearOperator op;
  op.n_nodes = mesh.n_nodes();
  op.mass = kron(Eigen::Matrix3d::Identity(), m);
  op.stiffness_side = kron(coupling, -k);
  const Eigen::MatrixXd laplacian = m.llt().solve(-k);
  op.op = kron(coupling, laplacian);
  return op;
}

std::vector<std::complex<double>> discrete_eigenvalues(const LinearOperator& op) {
  const Eigen::LLT<Eigen::MatrixXd> llt(op.mass);
  if (llt.info() != Eigen::Success) throw NumericalError("mass matrix is not SPD");
  // L^{-1} B L^{-T} is similar to M^{-1} B.
  const Eigen::MatrixXd lower = llt.matrixL();
  Eigen::MatrixXd c = lower.triangularView<Eigen::Lower>().solve(op.stiffness_side);
  c = lower.triangularView<Eigen::Lower>().solve(c.transpose()).transpose();

  Eigen::EigenSolver<Eigen::MatrixXd> solver(c, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  std::vector<std::complex<double>> out(ev.data(), ev.data() + ev.size());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (std::abs(x) != std::abs(y)) return std::abs(x) < std::abs(y);
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

SpectrumMatch match_spectrum(const std::vector<EigenvalueFamily>& analytic,
                             const std::vector<std::complex<double>>& discrete,
                             double tolerance) {
  std::vector<EigenvalueFamily> sorted = analytic;
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    return std::abs(x.value) < std::abs(y.value);
  });

  SpectrumMatch result;
  std::vector<bool> used(discrete.size(), false);
  for (const auto& fam : sorted) {
    std::size_t best = discrete.size();
    double best_dist = 0.0;
    for (std::size_t j = 0; j < discrete.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(discrete[j] - fam.value);
      if (best == discrete.size() || d < best_dist) {
        best = j;
        best_dist = d;
      }
    }
    const double scale = std::abs(fam.value);
    const bool ok = best < discrete.size() &&
                    (scale == 0.0 ? best_dist <= 1e-10 : best_dist <= tolerance * scale);
    if (!ok) {
      result.unmatched_analytic.push_back(fam);
      continue;
    }
    used[best] = true;
    result.matched.push_back({fam, discrete[best], scale == 0.0 ? best_dist : best_dist / scale});
  }
  for (std::size_t j = 0; j < discrete.size(); ++j)
    if (!used[j]) result.surplus_discrete.push_back(discrete[j]);
  return result;
}

MagnetizationField linear_rhs(const MagnetizationField& z, const Discretization& disc,
                              const Equilibrium& base, const PhysicalParams& params,
                              const ControlSpec* spec, double t) {
  const MagnetizationField w = discrete_second_derivative(z, disc);
  const Vec3& a = base.vector();
  std::vector<Vec3> out(z.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    Vec3 d = params.nu * w[i] + cross(a, w[i]);
    if (spec) d += control_input(*spec, z[i], t);
    if (!is_finite(d)) throw NumericalError("numerical blow-up at node " + std::to_string(i));
    out[i] = d;
  }
  return MagnetizationField(z.mesh(), std::move(out));
}

Trajectory integrate_linear(const LinearState& z0, const PhysicalParams& params,
                            const ControlSpec& spec, const IntegratorOptions& opts) {
  params.validate();
  opts.validate();
  spec.validate();
  const Mesh& mesh = z0.z.mesh();
  if (mesh.length() != params.length)
    throw ValidationError("mesh length does not match the physical length");
  const double dt_max = max_stable_dt(mesh, params, spec.gain, opts.mass);
  if (!opts.allow_large_dt && opts.dt > dt_max) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "dt too large for mesh (dt=%g, limit %g for h=%g)", opts.dt,
                  dt_max, mesh.h());
    throw ValidationError(buf);
  }

  const auto disc = std::make_shared<const Discretization>(mesh, opts.mass);
  const Equilibrium base = z0.base;
  const ControlSpec* control = &spec;
  RhsFunction rhs_fn = [disc, base, params, control](const MagnetizationField& z, double t) {
    return linear_rhs(z, *disc, base, params, control, t);
  };
  const Vec3 r = spec.target.vector();
  RecordFunction record_fn = [r](const MagnetizationField& z, double t) {
    return make_record(t, z, r, LyapunovKind::Linear);
  };
  Trajectory traj = integrate_system(z0.z, rhs_fn, record_fn, opts, false);
  if (opts.renormalize.value_or(false))
    traj.warnings.insert(traj.warnings.begin(),
                         "renormalization does not apply to the linear system; ignored");
  return traj;
}

}  // namespace llc
