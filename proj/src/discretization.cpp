#include "llcontrol/discretization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace llc {

Mesh::Mesh(int n_elements, double length) : n_elements_(n_elements), length_(length) {
  if (n_elements < 2) throw ValidationError("mesh too coarse");
  if (!std::isfinite(length) || length <= 0.0) throw ValidationError("mesh length must be > 0");
  h_ = length / n_elements;
}

double Mesh::node(std::size_t i) const {
  if (i == static_cast<std::size_t>(n_elements_)) return length_;
  return static_cast<double>(i) * h_;
}

std::vector<double> Mesh::nodes() const {
  std::vector<double> x(n_nodes());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = node(i);
  return x;
}

Mesh build_mesh(int n_elements, double length) { return Mesh(n_elements, length); }

double TridiagonalMatrix::at(std::size_t row, std::size_t col) const {
  if (row == col) return diag[row];
  if (col + 1 == row) return sub[row];
  if (row + 1 == col) return super[row];
  return 0.0;
}

namespace {

template <class T>
std::vector<T> tridiag_apply(const TridiagonalMatrix& a, std::span<const T> x) {
  const std::size_t n = a.size();
  std::vector<T> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    T acc = a.diag[i] * x[i];
    if (i > 0) acc += a.sub[i] * x[i - 1];
    if (i + 1 < n) acc += a.super[i] * x[i + 1];
    y[i] = acc;
  }
  return y;
}

}  // namespace

std::vector<double> TridiagonalMatrix::apply(std::span<const double> x) const {
  return tridiag_apply<double>(*this, x);
}

std::vector<Vec3> TridiagonalMatrix::apply(std::span<const Vec3> x) const {
  return tridiag_apply<Vec3>(*this, x);
}

TridiagonalMatrix assemble_mass(const Mesh& mesh) {
  const std::size_t n = mesh.n_nodes();
  const double h = mesh.h();
  TridiagonalMatrix m{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0)};
  // element matrix (h/6) [2 1; 1 2]
  for (std::size_t e = 0; e + 1 < n; ++e) {
    m.diag[e] += h / 3.0;
    m.diag[e + 1] += h / 3.0;
    m.super[e] += h / 6.0;
    m.sub[e + 1] += h / 6.0;
  }
  return m;
}

TridiagonalMatrix assemble_lumped_mass(const Mesh& mesh) {
  const std::size_t n = mesh.n_nodes();
  const double h = mesh.h();
  TridiagonalMatrix m{std::vector<double>(n, 0.0), std::vector<double>(n, h),
                      std::vector<double>(n, 0.0)};
  m.diag.front() = m.diag.back() = 0.5 * h;
  return m;
}

std::string to_string(MassTreatment mass) {
  return mass == MassTreatment::Lumped ? "lumped" : "consistent";
}

MassTreatment parse_mass_treatment(const std::string& s) {
  if (s == "lumped") return MassTreatment::Lumped;
  if (s == "consistent") return MassTreatment::Consistent;
  throw ValidationError("mass must be lumped or consistent, got '" + s + "'");
}

TridiagonalMatrix assemble_stiffness(const Mesh& mesh) {
  const std::size_t n = mesh.n_nodes();
  const double inv_h = 1.0 / mesh.h();
  TridiagonalMatrix k{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
                      std::vector<double>(n, 0.0)};
  // element matrix (1/h) [1 -1; -1 1]
  for (std::size_t e = 0; e + 1 < n; ++e) {
    k.diag[e] += inv_h;
    k.diag[e + 1] += inv_h;
    k.super[e] -= inv_h;
    k.sub[e + 1] -= inv_h;
  }
  return k;
}

MagnetizationField::MagnetizationField(Mesh mesh, std::vector<Vec3> values)
    : mesh_(mesh), values_(std::move(values)) {
  if (values_.size() != mesh_.n_nodes())
    throw ValidationError("field has " + std::to_string(values_.size()) + " values for " +
                          std::to_string(mesh_.n_nodes()) + " nodes");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!is_finite(values_[i]))
      throw NumericalError("non-finite field value at node " + std::to_string(i));
}

MagnetizationField::MagnetizationField(Mesh mesh, const Vec3& value)
    : MagnetizationField(mesh, std::vector<Vec3>(mesh.n_nodes(), value)) {}

Vec3 MagnetizationField::evaluate(double x) const {
  if (!(x >= 0.0 && x <= mesh_.length()))
    throw ValidationError("evaluation point outside [0, L]");
  const double s = x / mesh_.h();
  const auto e = std::min(static_cast<std::size_t>(s), values_.size() - 2);
  const double w = s - static_cast<double>(e);
  return (1.0 - w) * values_[e] + w * values_[e + 1];
}

Discretization::Discretization(Mesh mesh, MassTreatment mass)
    : mesh_(mesh),
      treatment_(mass),
      mass_(mass == MassTreatment::Lumped ? assemble_lumped_mass(mesh) : assemble_mass(mesh)),
      stiffness_(assemble_stiffness(mesh)) {
  const std::size_t n = mass_.size();
  upper_.assign(n, 0.0);
  pivot_inv_.assign(n, 0.0);
  double pivot = mass_.diag[0];
  pivot_inv_[0] = 1.0 / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    upper_[i - 1] = mass_.super[i - 1] * pivot_inv_[i - 1];
    pivot = mass_.diag[i] - mass_.sub[i] * upper_[i - 1];
    if (!(pivot > 0.0)) throw NumericalError("singular mass matrix");
    pivot_inv_[i] = 1.0 / pivot;
  }
}

namespace {

template <class T>
std::vector<T> thomas_solve(const TridiagonalMatrix& a, const std::vector<double>& upper,
                            const std::vector<double>& pivot_inv, std::span<const T> b) {
  const std::size_t n = a.size();
  std::vector<T> x(n);
  x[0] = b[0] * pivot_inv[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = (b[i] - a.sub[i] * x[i - 1]) * pivot_inv[i];
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= upper[i] * x[i + 1];
  return x;
}

}  // namespace

std::vector<Vec3> Discretization::solve_mass(std::span<const Vec3> b) const {
  return thomas_solve<Vec3>(mass_, upper_, pivot_inv_, b);
}

std::vector<double> Discretization::solve_mass(std::span<const double> b) const {
  return thomas_solve<double>(mass_, upper_, pivot_inv_, b);
}

namespace {

std::vector<Vec3> second_derivative_values(const MagnetizationField& field,
                                           const Discretization& disc) {
  if (!(field.mesh() == disc.mesh()))
    throw ValidationError("field and discretization use different meshes");
  std::vector<Vec3> b = disc.stiffness().apply(std::span<const Vec3>(field.values()));
  for (auto& v : b) v = -v;
  return disc.solve_mass(b);
}

void check_finite_node(const Vec3& v, std::size_t i) {
  if (!is_finite(v)) throw NumericalError("numerical blow-up at node " + std::to_string(i));
}

}  // namespace

MagnetizationField discrete_second_derivative(const MagnetizationField& field,
                                              const Discretization& disc) {
  return MagnetizationField(field.mesh(), second_derivative_values(field, disc));
}

MagnetizationField rhs(const MagnetizationField& field, const Discretization& disc,
                       const PhysicalParams& params, const ControlSpec* spec, double t) {
  const std::vector<Vec3> w = second_derivative_values(field, disc);
  std::vector<Vec3> out(field.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3& m = field[i];
    Vec3 d = cross(m, w[i]) - params.nu * double_cross(m, w[i]);
    if (spec) d += control_input(*spec, m, t);
    check_finite_node(d, i);
    out[i] = d;
  }
  return MagnetizationField(field.mesh(), std::move(out));
}

std::vector<double> nodal_gradient_squared(const MagnetizationField& field) {
  const std::size_t n = field.size();
  const double h = field.mesh().h();
  std::vector<double> g(n);
  g[0] = ((field[1] - field[0]) / h).squaredNorm();
  g[n - 1] = ((field[n - 1] - field[n - 2]) / h).squaredNorm();
  for (std::size_t i = 1; i + 1 < n; ++i)
    g[i] = ((field[i + 1] - field[i - 1]) / (2.0 * h)).squaredNorm();
  return g;
}

MagnetizationField rhs_semilinear(const MagnetizationField& field, const Discretization& disc,
                                  const PhysicalParams& params, const ControlSpec* spec,
                                  double t) {
  for (std::size_t i = 0; i < field.size(); ++i)
    if (std::abs(field[i].norm() - 1.0) > 1e-3)
      throw ValidationError("semilinear form invalid off the sphere (node " +
                            std::to_string(i) + ")");
  const std::vector<Vec3> w = second_derivative_values(field, disc);
  const std::vector<double> grad2 = nodal_gradient_squared(field);
  std::vector<Vec3> out(field.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Vec3& m = field[i];
    Vec3 d = params.nu * w[i] + cross(m, w[i]) + params.nu * grad2[i] * m;
    if (spec) d += control_input(*spec, m, t);
    check_finite_node(d, i);
    out[i] = d;
  }
  return MagnetizationField(field.mesh(), std::move(out));
}

}  // namespace llc
