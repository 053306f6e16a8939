#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "llcontrol/spectral.hpp"
#include "llcontrol/verification.hpp"

using namespace llc;

namespace {
constexpr double kPi = std::numbers::pi;

const EigenvalueFamily& find(const std::vector<EigenvalueFamily>& v, FamilyLabel l, int n) {
  for (const auto& f : v)
    if (f.label == l && f.n == n) return f;
  throw std::runtime_error("family not found");
}
}  // namespace

TEST(Analytic, ExactlyOneZero) {
  for (int n_max : {0, 3, 50}) {
    const auto ev = analytic_eigenvalues({0.02, 1.0}, n_max);
    int zeros = 0;
    for (const auto& f : ev) zeros += f.value == std::complex<double>(0, 0);
    EXPECT_EQ(zeros, 1);
    EXPECT_EQ(ev.size(), 1u + 3u * (n_max + 1) + 3u * n_max);
  }
}

TEST(Analytic, NonpositiveRealParts) {
  for (double nu : {0.0, 0.02, 1.0})
    for (const auto& f : analytic_eigenvalues({nu, 1.0}, 50)) EXPECT_LE(f.value.real(), 0.0);
}

TEST(Analytic, FormulaValues) {
  const auto ev = analytic_eigenvalues({0.02, 1.0}, 3);
  const auto l2p = find(ev, FamilyLabel::Lambda2Plus, 0).value;
  EXPECT_NEAR(l2p.real(), -0.197392, 1e-6);
  EXPECT_NEAR(l2p.imag(), 9.869604, 1e-6);
  EXPECT_NEAR(find(ev, FamilyLabel::Lambda5, 1).value.real(), -0.789568, 1e-6);
  EXPECT_EQ(find(ev, FamilyLabel::Lambda2Minus, 2).value, std::conj(find(ev, FamilyLabel::Lambda2Plus, 2).value));
  EXPECT_NEAR(find(ev, FamilyLabel::Lambda3, 1).value.real(), -9 * kPi * kPi * 0.02, 1e-12);
  const auto l4m = find(ev, FamilyLabel::Lambda4Minus, 3).value;
  EXPECT_NEAR(l4m.imag(), -36 * kPi * kPi, 1e-10);
}

TEST(Analytic, ScalesWithLength) {
  const auto a = analytic_eigenvalues({0.02, 2.0}, 1);
  EXPECT_NEAR(find(a, FamilyLabel::Lambda3, 0).value.real(), -0.02 * kPi * kPi / 4, 1e-14);
}

TEST(LinearOperator, ConstantsInKernel) {
  const Mesh mesh(16, 1.0);
  const auto op = assemble_linear_operator(Equilibrium(Vec3(0, 0, 1)), {0.02, 1.0}, mesh);
  for (int c = 0; c < 3; ++c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(3 * 17);
    v.segment(c * 17, 17).setConstant(1.0 + c);
    EXPECT_LT((op.op * v).norm(), 1e-10);
    EXPECT_LT((op.stiffness_side * v).norm(), 1e-10);
  }
}

TEST(LinearOperator, CrossMatrix) {
  const Vec3 a(0.3, -0.4, 0.5), v(1.0, 2.0, -3.0);
  EXPECT_LT((cross_matrix(a) * v - a.cross(v)).norm(), 1e-15);
}

TEST(Discrete, ZeroClusterAndSmallestModes) {
  const auto rep = spectrum_report({0.02, 1.0}, Equilibrium(Vec3(1, 0, 0)));
  EXPECT_EQ(rep.zero_count, 3);
  EXPECT_LE(rep.zero_max, 1e-10);
  ASSERT_EQ(rep.rel_errors.size(), 5u);
  for (double e : rep.rel_errors) EXPECT_LE(e, 0.02);
  for (double o : rep.orders) EXPECT_NEAR(o, 2.0, 0.2);
}

TEST(Discrete, OtherBaseVectorsMatchToo) {
  const Equilibrium a(Vec3(0, 0.6, 0.8));
  const auto rep = spectrum_report({0.02, 1.0}, a);
  EXPECT_EQ(rep.zero_count, 3);
  for (double e : rep.rel_errors) EXPECT_LE(e, 0.02);
}

TEST(Match, AllLowModesMatchedAtFineMesh) {
  const PhysicalParams p{0.02, 1.0};
  const auto discrete = discrete_eigenvalues(
      assemble_linear_operator(Equilibrium(Vec3(1, 0, 0)), p, Mesh(64, 1.0)));
  EXPECT_EQ(discrete.size(), 3u * 65u);
  const auto m = match_spectrum(analytic_eigenvalues(p, 5), discrete, 0.1);
  EXPECT_TRUE(m.unmatched_analytic.empty());
  EXPECT_EQ(m.matched.size() + m.surplus_discrete.size(), discrete.size());
}

TEST(Match, ReportsUnmatchedAndSurplus) {
  std::vector<EigenvalueFamily> analytic{{FamilyLabel::Zero, 0, {0, 0}},
                                         {FamilyLabel::Lambda3, 0, {-1.0, 0}}};
  const auto m = match_spectrum(analytic, {{0, 0}, {-5.0, 0}}, 0.1);
  EXPECT_EQ(m.matched.size(), 1u);
  ASSERT_EQ(m.unmatched_analytic.size(), 1u);
  EXPECT_EQ(m.unmatched_analytic[0].label, FamilyLabel::Lambda3);
  ASSERT_EQ(m.surplus_discrete.size(), 1u);
}

TEST(Linear, EquilibriumIsConstant) {
  const Mesh mesh(12, 1.0);
  ControlSpec s;
  s.gain = 0.5;
  s.target = Equilibrium(Vec3(0, 1, 0));
  IntegratorOptions o;
  o.dt = 1e-3;
  o.t_final = 1.0;
  const auto t = integrate_linear({MagnetizationField(mesh, Vec3(0, 1, 0)), Equilibrium(Vec3(1, 0, 0))},
                                  {}, s, o);
  for (const auto& d : t.diagnostics) EXPECT_EQ(d.l2_distance_to_target, 0.0);
}

TEST(Linear, ConstantPerturbationDecaysAtTwoK) {
  const Mesh mesh(12, 1.0);
  ControlSpec s;
  s.gain = 0.5;
  s.target = Equilibrium(Vec3(1, 0, 0));
  IntegratorOptions o;
  o.dt = 1e-3;
  o.t_final = 10.0;
  const auto t = integrate_linear({MagnetizationField(mesh, Vec3(1.2, -0.3, 0.1)), Equilibrium(Vec3(1, 0, 0))},
                                  {}, s, o);
  EXPECT_NEAR(decay_rate_fit(t), 1.0, 0.02);
}

TEST(Linear, RenormalizeRequestWarns) {
  const Mesh mesh(4, 1.0);
  ControlSpec s;
  IntegratorOptions o;
  o.t_final = 0.01;
  o.renormalize = true;
  const auto t = integrate_linear({MagnetizationField(mesh, Vec3(1, 0, 0)), Equilibrium(Vec3(1, 0, 0))}, {}, s, o);
  EXPECT_EQ(t.warnings.size(), 1u);
}
