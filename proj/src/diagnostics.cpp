#include "llcontrol/diagnostics.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace llc {

std::vector<double> trapezoid_weights(const Mesh& mesh) {
  std::vector<double> w(mesh.n_nodes(), mesh.h());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

namespace {

template <class F>
double trapezoid(const Mesh& mesh, F&& f) {
  const auto w = trapezoid_weights(mesh);
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) sum += w[i] * f(i);
  return sum;
}

std::vector<Vec3> nodal_gradient(const MagnetizationField& field) {
  const std::size_t n = field.size();
  const double h = field.mesh().h();
  std::vector<Vec3> g(n);
  g[0] = (field[1] - field[0]) / h;
  g[n - 1] = (field[n - 1] - field[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (field[i + 1] - field[i - 1]) / (2.0 * h);
  return g;
}

}  // namespace

double l2_norm_squared(const MagnetizationField& field) {
  return trapezoid(field.mesh(), [&](std::size_t i) { return field[i].squaredNorm(); });
}

double l2_norm(const MagnetizationField& field) { return std::sqrt(l2_norm_squared(field)); }

double gradient_norm_squared(const MagnetizationField& field) {
  const double h = field.mesh().h();
  double sum = 0.0;
  for (std::size_t e = 0; e + 1 < field.size(); ++e) sum += (field[e + 1] - field[e]).squaredNorm();
  return sum / h;
}

double h1_norm(const MagnetizationField& field) {
  return std::sqrt(l2_norm_squared(field) + gradient_norm_squared(field));
}

double l2_distance(const MagnetizationField& field, const Vec3& r) {
  return std::sqrt(
      trapezoid(field.mesh(), [&](std::size_t i) { return (field[i] - r).squaredNorm(); }));
}

double h1_distance(const MagnetizationField& field, const Vec3& r) {
  const double l2 = l2_distance(field, r);
  return std::sqrt(l2 * l2 + gradient_norm_squared(field));
}

double exchange_energy(const MagnetizationField& field) {
  return 0.5 * gradient_norm_squared(field);
}

double max_norm_drift(const MagnetizationField& field) {
  double drift = 0.0;
  for (const auto& m : field.values()) drift = std::max(drift, std::abs(m.norm() - 1.0));
  return drift;
}

double lyapunov_V(const MagnetizationField& field, const Equilibrium& r) {
  const double l2 = l2_distance(field, r.vector());
  return 0.5 * l2 * l2 + exchange_energy(field);
}

DiagnosticRecord make_record(double t, const MagnetizationField& field, const Vec3& reference,
                             LyapunovKind kind) {
  DiagnosticRecord rec;
  rec.t = t;
  rec.l2_distance_to_target = l2_distance(field, reference);
  rec.exchange_energy = exchange_energy(field);
  rec.h1_distance_to_target = std::sqrt(rec.l2_distance_to_target * rec.l2_distance_to_target +
                                        2.0 * rec.exchange_energy);
  rec.max_norm_drift = max_norm_drift(field);
  switch (kind) {
    case LyapunovKind::Controlled:
      rec.lyapunov =
          0.5 * rec.l2_distance_to_target * rec.l2_distance_to_target + rec.exchange_energy;
      break;
    case LyapunovKind::Exchange:
      rec.lyapunov = rec.exchange_energy;
      break;
    case LyapunovKind::Linear:
      rec.lyapunov = 0.5 * rec.l2_distance_to_target * rec.l2_distance_to_target;
      break;
  }
  return rec;
}

double decay_rate_fit(std::span<const double> times, std::span<const double> values,
                      double window_fraction) {
  if (times.size() != values.size()) throw ValidationError("times and values differ in length");
  if (!(window_fraction > 0.0 && window_fraction < 1.0))
    throw ValidationError("window_fraction must lie in (0, 1)");
  const std::size_t n = times.size();
  const auto count = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n)));
  if (count < 10)
    throw ValidationError("decay fit needs at least 10 samples in the window, got " +
                          std::to_string(count));
  const std::size_t first = n - count;
  double st = 0.0, sy = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    if (!(values[i] > 0.0)) throw ValidationError("trajectory reached target; rate undefined");
    st += times[i];
    sy += std::log(values[i]);
  }
  const double mt = st / count, my = sy / count;
  double stt = 0.0, sty = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double dt = times[i] - mt;
    stt += dt * dt;
    sty += dt * (std::log(values[i]) - my);
  }
  if (!(stt > 0.0)) throw ValidationError("decay fit window spans zero time");
  return -sty / stt;
}

double decay_rate_fit(const Trajectory& traj, double window_fraction) {
  std::vector<double> h1sq(traj.diagnostics.size());
  for (std::size_t i = 0; i < h1sq.size(); ++i) {
    const double d = traj.diagnostics[i].h1_distance_to_target;
    h1sq[i] = d * d;
  }
  return decay_rate_fit(traj.times, h1sq, window_fraction);
}

double check_lemma_zero_integral(const MagnetizationField& field, const Discretization& disc,
                                 const Vec3& r) {
  const MagnetizationField w = discrete_second_derivative(field, disc);
  return trapezoid(field.mesh(), [&](std::size_t i) {
    return (field[i] - r).dot(cross(field[i], w[i]));
  });
}

double check_lemma_poincare_cross(const MagnetizationField& field, const Discretization& disc) {
  const MagnetizationField w = discrete_second_derivative(field, disc);
  const double denom2 =
      trapezoid(field.mesh(), [&](std::size_t i) { return cross(field[i], w[i]).squaredNorm(); });
  if (std::sqrt(denom2) < 1e-14) return std::numeric_limits<double>::infinity();
  // On each element the midpoint value times the constant slope reduces to
  // (m_e x m_{e+1}) / h.
  const double h = field.mesh().h();
  double num2 = 0.0;
  for (std::size_t e = 0; e + 1 < field.size(); ++e)
    num2 += cross(field[e], field[e + 1]).squaredNorm();
  num2 /= h;
  return std::sqrt(num2 / denom2);
}

std::pair<double, double> check_cross_bound(const Equilibrium& a,
                                            const MagnetizationField& field) {
  const double lhs = std::sqrt(trapezoid(
      field.mesh(), [&](std::size_t i) { return cross(a.vector(), field[i]).squaredNorm(); }));
  return {lhs, l2_norm(field)};
}

std::pair<double, double> check_product_rule_identity(const MagnetizationField& field,
                                                      const Discretization& disc) {
  const MagnetizationField w = discrete_second_derivative(field, disc);
  const std::vector<Vec3> mx = nodal_gradient(field);
  const double integral = trapezoid(field.mesh(), [&](std::size_t i) {
    return cross(field[i], mx[i]).dot(cross(field[i], w[i]));
  });
  const std::size_t last = field.size() - 1;
  const double boundary = 0.5 * (cross(field[last], mx[last]).squaredNorm() -
                                 cross(field[0], mx[0]).squaredNorm());
  return {integral, boundary};
}

}  // namespace llc
