#pragma once

// Continuum-level vocabulary for the controlled 1D Landau-Lifshitz equation:
// magnetization vectors, the cross-product algebra used by the right-hand
// side, equilibria, and the proportional control law k(r - m).

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace llc {

using Vec3 = Eigen::Vector3d;

/// Thrown when a caller-supplied value violates a precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a computation produces non-finite values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_finite(const Vec3& v);

/// A spatially constant unit vector; the equilibrium set of the uncontrolled
/// equation. Construction rejects vectors whose norm differs from one by more
/// than 1e-12 rather than normalizing them.
class Equilibrium {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit Equilibrium(const Vec3& a);

  const Vec3& vector() const { return a_; }

 private:
  Vec3 a_;
};

struct PhysicalParams {
  double nu = 0.02;     // damping
  double length = 1.0;  // domain [0, L]

  void validate() const;
};

/// Additive spatially uniform forcing amplitude * cos(omega * t) on one
/// component (1-based: 1, 2 or 3).
struct PeriodicDrive {
  double amplitude = 0.0;
  double omega = 1.0;
  int component = 1;

  void validate() const;
  Vec3 value(double t) const;
};

struct ControlSpec {
  double gain = 0.0;
  Equilibrium target{Vec3::UnitX()};
  std::optional<PeriodicDrive> drive;

  void validate() const;
};

Vec3 cross(const Vec3& u, const Vec3& v);

/// m x (m x h), evaluated as nested cross products.
Vec3 double_cross(const Vec3& m, const Vec3& h);

/// k(r - m) plus the periodic drive when one is configured.
Vec3 control_input(const ControlSpec& spec, const Vec3& m, double t);

/// Sufficient gain for global stability of the controlled equation: 8 nu L^4.
double gain_threshold(const PhysicalParams& params);

/// m / |m|. Throws ValidationError("degenerate magnetization") for m = 0.
Vec3 project_to_sphere(const Vec3& m);

std::string to_string(const Vec3& v);

}  // namespace llc
