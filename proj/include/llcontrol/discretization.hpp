#pragma once

// Linear-spline Galerkin discretization of [0, L] with natural (Neumann)
// boundary conditions. Nonlinear terms are collocated at the nodes after a
// mass solve for the second derivative.
//
// The default lumped (nodal-quadrature) mass makes the discrete energy
// identities exact: sum_i W_i r . (m_i x w_i) = 0 and sum_i W_i w_i . (m_i x w_i) = 0,
// so the discrete V = 1/2|m - r|^2 + 1/2|m_x|^2 inherits the continuum
// decrease argument. The consistent mass does not; on coarse meshes V can rise.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "llcontrol/model.hpp"

namespace llc {

/// Uniform mesh of n_elements linear elements on [0, length].
class Mesh {
 public:
  Mesh(int n_elements, double length);

  int n_elements() const { return n_elements_; }
  std::size_t n_nodes() const { return static_cast<std::size_t>(n_elements_) + 1; }
  double length() const { return length_; }
  double h() const { return h_; }
  double node(std::size_t i) const;
  std::vector<double> nodes() const;

  bool operator==(const Mesh& other) const {
    return n_elements_ == other.n_elements_ && length_ == other.length_;
  }

 private:
  int n_elements_;
  double length_;
  double h_;
};

/// Throws ValidationError("mesh too coarse") for fewer than two elements.
Mesh build_mesh(int n_elements, double length);

/// Symmetric tridiagonal storage. sub[i] couples row i to i-1 (sub[0] unused),
/// super[i] couples row i to i+1 (super[n-1] unused).
struct TridiagonalMatrix {
  std::vector<double> sub, diag, super;

  std::size_t size() const { return diag.size(); }
  double at(std::size_t row, std::size_t col) const;
  std::vector<double> apply(std::span<const double> x) const;
  std::vector<Vec3> apply(std::span<const Vec3> x) const;
};

enum class MassTreatment { Lumped, Consistent };

std::string to_string(MassTreatment mass);
MassTreatment parse_mass_treatment(const std::string& s);

/// Consistent mass (h/6)[1 4 1], h/3 on the boundary diagonal.
TridiagonalMatrix assemble_mass(const Mesh& mesh);
/// Row-summed mass: the trapezoid weights on the diagonal.
TridiagonalMatrix assemble_lumped_mass(const Mesh& mesh);
TridiagonalMatrix assemble_stiffness(const Mesh& mesh);

/// Nodal values of a 3-vector field on a mesh. Entries are always finite.
class MagnetizationField {
 public:
  MagnetizationField(Mesh mesh, std::vector<Vec3> values);
  /// Uniform field.
  MagnetizationField(Mesh mesh, const Vec3& value);

  const Mesh& mesh() const { return mesh_; }
  std::size_t size() const { return values_.size(); }
  const Vec3& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Vec3>& values() const { return values_; }

  /// Linear interpolation of the spline at x in [0, L].
  Vec3 evaluate(double x) const;

 private:
  Mesh mesh_;
  std::vector<Vec3> values_;
};

template <class F>
MagnetizationField sample_field(const Mesh& mesh, F&& f) {
  std::vector<Vec3> v(mesh.n_nodes());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh.node(i));
  return MagnetizationField(mesh, std::move(v));
}

/// Assembled mass and stiffness for one mesh, with the mass factorization
/// cached for repeated solves.
class Discretization {
 public:
  explicit Discretization(Mesh mesh, MassTreatment mass = MassTreatment::Lumped);

  const Mesh& mesh() const { return mesh_; }
  MassTreatment mass_treatment() const { return treatment_; }
  const TridiagonalMatrix& mass() const { return mass_; }
  const TridiagonalMatrix& stiffness() const { return stiffness_; }

  /// Solves mass * x = b componentwise.
  std::vector<Vec3> solve_mass(std::span<const Vec3> b) const;
  std::vector<double> solve_mass(std::span<const double> b) const;

 private:
  Mesh mesh_;
  MassTreatment treatment_;
  TridiagonalMatrix mass_, stiffness_;
  // Thomas elimination factors of the mass matrix.
  std::vector<double> upper_, pivot_inv_;
};

/// w with mass * w = -stiffness * m: the discrete m_xx under Neumann data.
MagnetizationField discrete_second_derivative(const MagnetizationField& field,
                                              const Discretization& disc);

/// m x w - nu m x (m x w) (+ control) at every node.
MagnetizationField rhs(const MagnetizationField& field, const Discretization& disc,
                       const PhysicalParams& params, const ControlSpec* spec, double t);

/// nu w + m x w + nu |m_x|^2 m (+ control); valid only on the unit sphere.
MagnetizationField rhs_semilinear(const MagnetizationField& field, const Discretization& disc,
                                  const PhysicalParams& params, const ControlSpec* spec,
                                  double t);

/// Nodal |m_x|^2 from centered differences (one-sided at the two ends).
std::vector<double> nodal_gradient_squared(const MagnetizationField& field);

}  // namespace llc
