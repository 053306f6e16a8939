#pragma once

// Executable property checks: equilibrium fidelity, the cross-product lemmas
// over random fields, spectrum agreement and convergence orders.

#include <random>
#include <string>
#include <vector>

#include "llcontrol/diagnostics.hpp"
#include "llcontrol/spectral.hpp"

namespace llc {

struct CheckResult {
  std::string name;
  double value = 0.0;      // worst observed value
  double threshold = 0.0;  // pass bound for `value`
  bool pass = false;
  std::string detail;
};

Vec3 random_unit_vector(std::mt19937_64& rng);

/// Pointwise normalization of b + sum_{j=0..3} c_j cos(j pi x / L) with
/// Gaussian coefficients. Every cosine has zero slope at both ends, so the
/// result satisfies the Neumann conditions. Draws whose raw norm dips below 0.1
/// anywhere are rejected and redrawn.
MagnetizationField random_cosine_field(const Mesh& mesh, std::mt19937_64& rng);

/// Smooth unit field (cos g, sin g, 0), g = pi x^2 (3 - 2x) / L^2 scaled to
/// [0, L]; g' vanishes at both ends.
MagnetizationField planar_test_field(const Mesh& mesh);

/// Smooth unit field with all three components varying; Neumann-compatible.
MagnetizationField spatial_test_field(const Mesh& mesh);

/// max |rhs| over `trials` random constant unit fields, no control.
CheckResult check_equilibrium_fidelity(const Discretization& disc, const PhysicalParams& params,
                                       int trials, std::mt19937_64& rng, double tol = 1e-13);

/// max (|a x m| - |m|) over random fields and random unit a.
CheckResult check_cross_bound_sweep(const Mesh& mesh, int trials, std::mt19937_64& rng);

/// Tolerance C h^2 + 1e-12 for the zero-integral lemma. C is ten times the
/// residual per h^2 measured on spatial_test_field with the consistent mass on
/// 32 elements; the constant floor absorbs rounding.
double zero_integral_tolerance(const Mesh& mesh);

CheckResult check_zero_integral_sweep(const Discretization& disc, int trials,
                                      std::mt19937_64& rng);

/// Largest |m x m_x| / |m x m_xx| over random fields against 4 L^2 + 0.05.
CheckResult check_poincare_sweep(const Discretization& disc, int trials, std::mt19937_64& rng);

struct SpectrumReport {
  int zero_count = 0;             // discrete eigenvalues with |lambda| <= 1e-10
  double zero_max = 0.0;          // largest |lambda| among the three smallest
  std::vector<double> rel_errors;  // five smallest nonzero analytic modes, fine mesh
  std::vector<double> orders;      // log2(err coarse / err fine) for the same modes
};

SpectrumReport spectrum_report(const PhysicalParams& params, const Equilibrium& base,
                               int coarse_elements = 32, int fine_elements = 64);

std::vector<CheckResult> check_spectrum(const PhysicalParams& params, const Equilibrium& base);

/// max-norm |rhs - rhs_semilinear| on planar_test_field for each mesh size.
std::vector<double> semilinear_differences(const PhysicalParams& params,
                                           const std::vector<int>& n_elements,
                                           MassTreatment mass = MassTreatment::Lumped);

CheckResult check_semilinear_order(const PhysicalParams& params,
                                   MassTreatment mass = MassTreatment::Lumped);

struct VerificationOptions {
  int n_fields = 1000;
  int n_elements = 128;
  unsigned long long seed = 20160101ULL;
  Vec3 spectrum_base = Vec3::UnitX();
  MassTreatment mass = MassTreatment::Lumped;
};

std::vector<CheckResult> run_verification(const PhysicalParams& params,
                                          const VerificationOptions& options);

}  // namespace llc
