#include "llcontrol/model.hpp"

#include <cmath>
#include <cstdio>

namespace llc {

bool is_finite(const Vec3& v) {
  return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

Equilibrium::Equilibrium(const Vec3& a) : a_(a) {
  if (!is_finite(a)) throw ValidationError("equilibrium has non-finite components");
  if (std::abs(a.norm() - 1.0) > kNormTolerance)
    throw ValidationError("equilibrium must be a unit vector, got " + to_string(a) +
                          " with norm " + std::to_string(a.norm()));
}

void PhysicalParams::validate() const {
  if (!std::isfinite(nu) || nu < 0.0) throw ValidationError("nu must be finite and >= 0");
  if (!std::isfinite(length) || length <= 0.0)
    throw ValidationError("length must be finite and > 0");
}

void PeriodicDrive::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0)
    throw ValidationError("drive amplitude must be finite and >= 0");
  if (!std::isfinite(omega) || omega <= 0.0) throw ValidationError("drive omega must be > 0");
  if (component < 1 || component > 3)
    throw ValidationError("drive component must be 1, 2 or 3");
}

Vec3 PeriodicDrive::value(double t) const {
  Vec3 u = Vec3::Zero();
  u[component - 1] = amplitude * std::cos(omega * t);
  return u;
}

void ControlSpec::validate() const {
  if (!std::isfinite(gain) || gain < 0.0) throw ValidationError("gain must be finite and >= 0");
  if (drive) drive->validate();
}

Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

Vec3 double_cross(const Vec3& m, const Vec3& h) { return cross(m, cross(m, h)); }

Vec3 control_input(const ControlSpec& spec, const Vec3& m, double t) {
  Vec3 u = spec.gain * (spec.target.vector() - m);
  if (spec.drive) u += spec.drive->value(t);
  return u;
}

double gain_threshold(const PhysicalParams& params) {
  const double l2 = params.length * params.length;
  return 8.0 * params.nu * l2 * l2;
}

Vec3 project_to_sphere(const Vec3& m) {
  const double n = m.norm();
  if (!(n > 0.0)) throw ValidationError("degenerate magnetization");
  return m / n;
}

std::string to_string(const Vec3& v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6g, %.6g, %.6g)", v[0], v[1], v[2]);
  return buf;
}

}  // namespace llc
