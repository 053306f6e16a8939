#pragma once

// Norms, Lyapunov functionals, decay-rate fitting and executable forms of the
// cross-product lemmas behind the stability proofs.
//
// Quadrature: nodal trapezoid rule for L2 quantities; derivatives of the
// linear spline are constant per element and integrated exactly.

#include <span>
#include <utility>

#include "llcontrol/discretization.hpp"
#include "llcontrol/trajectory.hpp"

namespace llc {

/// Trapezoid weights for the nodes of `mesh`.
std::vector<double> trapezoid_weights(const Mesh& mesh);

double l2_norm_squared(const MagnetizationField& field);
double l2_norm(const MagnetizationField& field);
/// |m_x|^2 in L2, exact for the piecewise-linear interpolant.
double gradient_norm_squared(const MagnetizationField& field);
double h1_norm(const MagnetizationField& field);

double l2_distance(const MagnetizationField& field, const Vec3& r);
/// |m - r|_{H1}; the gradient part is |m_x| since r is constant.
double h1_distance(const MagnetizationField& field, const Vec3& r);

double exchange_energy(const MagnetizationField& field);
double max_norm_drift(const MagnetizationField& field);

/// V(m) = 1/2 |m - r|^2 + 1/2 |m_x|^2.
double lyapunov_V(const MagnetizationField& field, const Equilibrium& r);

enum class LyapunovKind {
  Controlled,  // V(m) relative to the target
  Exchange,    // 1/2 |m_x|^2, the uncontrolled energy
  Linear,      // 1/2 |z - r|^2
};

DiagnosticRecord make_record(double t, const MagnetizationField& field, const Vec3& reference,
                             LyapunovKind kind);

/// Least-squares rate of exponential decay of h1_distance^2 over the trailing
/// `window_fraction` of samples. Positive means decay.
double decay_rate_fit(const Trajectory& traj, double window_fraction = 0.75);
double decay_rate_fit(std::span<const double> times, std::span<const double> values,
                      double window_fraction = 0.75);

/// Trapezoid value of the integral of (m - r) . (m x m_xx); zero in the continuum.
double check_lemma_zero_integral(const MagnetizationField& field, const Discretization& disc,
                                 const Vec3& r);

/// |m x m_x| / |m x m_xx|, or +infinity when the denominator is below 1e-14.
/// The continuum bound is 4 L^2.
double check_lemma_poincare_cross(const MagnetizationField& field, const Discretization& disc);

/// (|a x m|, |m|) in L2.
std::pair<double, double> check_cross_bound(const Equilibrium& a, const MagnetizationField& field);

/// Integral of (m x m_x) . (m x m_xx) and the boundary term
/// 1/2 (|m x m_x|^2(L) - |m x m_x|^2(0)); equal in the continuum.
std::pair<double, double> check_product_rule_identity(const MagnetizationField& field,
                                                      const Discretization& disc);

}  // namespace llc
