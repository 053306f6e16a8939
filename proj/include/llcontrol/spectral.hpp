#pragma once

// Spectrum of the Landau-Lifshitz equation linearized about an equilibrium a,
//   A z = nu z_xx + a x z_xx   (Neumann ends),
// in closed form and for the Galerkin operator, plus the controlled linear
// closed loop  z_t = A z + k (r - z).

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "llcontrol/discretization.hpp"
#include "llcontrol/integrator.hpp"

namespace llc {

enum class FamilyLabel { Zero, Lambda2Plus, Lambda2Minus, Lambda3, Lambda4Plus, Lambda4Minus, Lambda5 };

std::string to_string(FamilyLabel label);

struct EigenvalueFamily {
  FamilyLabel label = FamilyLabel::Zero;
  int n = 0;
  std::complex<double> value;
};

/// lambda_1 = 0 once, then for each n the odd-mode families (mode 1 + 2n,
/// n = 0..n_max) and even-mode families (mode 2n, n = 1..n_max; n = 0 would
/// repeat the zero eigenvalue).
std::vector<EigenvalueFamily> analytic_eigenvalues(const PhysicalParams& params, int n_max);

/// Discrete generalized eigenproblem  stiffness_side v = lambda mass v  on
/// stacked nodal components (index = component * n_nodes + node).
struct LinearOperator {
  Eigen::MatrixXd mass;            // I_3 (x) M
  Eigen::MatrixXd stiffness_side;  // (nu I_3 + [a]x) (x) (-K)
  Eigen::MatrixXd op;              // mass^{-1} stiffness_side = (nu I_3 + [a]x) (x) L_h
  std::size_t n_nodes = 0;
};

/// Cross-product matrix [a]x with [a]x v = a x v.
Eigen::Matrix3d cross_matrix(const Vec3& a);

/// Consistent mass by default: the generalized problem then keeps the
/// Galerkin symmetry structure.
LinearOperator assemble_linear_operator(const Equilibrium& a, const PhysicalParams& params,
                                        const Mesh& mesh,
                                        MassTreatment mass = MassTreatment::Consistent);

/// Eigenvalues of the generalized problem, reduced to a standard one through
/// the Cholesky factor of the mass matrix. Sorted by magnitude.
std::vector<std::complex<double>> discrete_eigenvalues(const LinearOperator& op);

struct MatchedMode {
  EigenvalueFamily analytic;
  std::complex<double> discrete;
  double relative_error = 0.0;
};

struct SpectrumMatch {
  std::vector<MatchedMode> matched;
  std::vector<EigenvalueFamily> unmatched_analytic;
  std::vector<std::complex<double>> surplus_discrete;
};

/// Pairs each analytic value (in order of magnitude) with the nearest unused
/// discrete value; a pair counts as matched when |d - a| <= tolerance |a|
/// (absolute 1e-10 for the zero eigenvalue).
SpectrumMatch match_spectrum(const std::vector<EigenvalueFamily>& analytic,
                             const std::vector<std::complex<double>>& discrete,
                             double tolerance = 0.1);

struct LinearState {
  MagnetizationField z;
  Equilibrium base;
};

/// nu w + a x w + control (w = discrete z_xx).
MagnetizationField linear_rhs(const MagnetizationField& z, const Discretization& disc,
                              const Equilibrium& base, const PhysicalParams& params,
                              const ControlSpec* spec, double t);

/// RK4 integration of the linear closed loop. Diagnostics are measured against
/// spec.target; `lyapunov` holds 1/2 |z - r|^2.
Trajectory integrate_linear(const LinearState& z0, const PhysicalParams& params,
                            const ControlSpec& spec, const IntegratorOptions& opts);

}  // namespace llc
