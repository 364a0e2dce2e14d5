#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "qtopo/errors.hpp"
#include "qtopo/qmodel.hpp"
#include "unit/test_support.hpp"

namespace qtopo {
namespace {

using testing::random_branch_config;
using testing::random_config;
using testing::uniform;

Eigen::Vector4d sorted_eigenvalues(const Operator4& h) {
  // Eigen's solver is independent of the library's Jacobi routine
  Eigen::SelfAdjointEigenSolver<Operator4> solver(h);
  return solver.eigenvalues();
}

TEST(SpinSiteOperators, SiteAlgebra) {
  const auto& ops = spin_site_operators();
  const Complex i{0.0, 1.0};
  EXPECT_EQ(max_abs(ops.sx_l * ops.sy_l - ops.sy_l * ops.sx_l - i * ops.sz_l), 0.0);
  EXPECT_EQ(max_abs(ops.sx_r * ops.sy_r - ops.sy_r * ops.sx_r - i * ops.sz_r), 0.0);
  EXPECT_EQ(max_abs(ops.sx_l * ops.sy_r - ops.sy_r * ops.sx_l), 0.0);
  EXPECT_EQ(max_abs(ops.sz_l * ops.sx_r - ops.sx_r * ops.sz_l), 0.0);
}

TEST(SpinSiteOperators, HermitianAndTotals) {
  const auto& ops = spin_site_operators();
  for (const Operator4* m :
       {&ops.sx_l, &ops.sy_l, &ops.sz_l, &ops.sx_r, &ops.sy_r, &ops.sz_r, &ops.hop, &ops.sz_total}) {
    EXPECT_TRUE(is_hermitian(*m));
  }
  EXPECT_EQ(max_abs(ops.sz_total - ops.sz_l - ops.sz_r), 0.0);
  // one particle: Sz_total is diag(+1/2, -1/2, +1/2, -1/2)
  EXPECT_EQ(ops.sz_total.diagonal().real(), Eigen::Vector4d(0.5, -0.5, 0.5, -0.5));
  EXPECT_EQ(max_abs(ops.hop * ops.hop - Operator4::Identity()), 0.0);
}

TEST(SpinSiteOperators, VanishOnOppositeSite) {
  const auto& ops = spin_site_operators();
  EXPECT_EQ((ops.sx_l.block<2, 2>(2, 2)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((ops.sz_r.block<2, 2>(0, 0)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BuildHamiltonian, NoTransverseFieldAtNorthPole) {
  const DriveConfig cfg = DriveConfig::make(2.0, 0.0, 0.0, 0.0, 0.0);
  for (double s : {0.0, 0.7, 3.0}) {
    const Operator4 h = build_hamiltonian(cfg, s);
    Operator4 expected = Operator4::Zero();
    expected.diagonal() << 1.0, -1.0, 1.0, -1.0;
    EXPECT_LT(max_abs(h - expected), 1e-15);
  }
}

TEST(BuildHamiltonian, OpposedFieldsAtEquatorMatchClosedForm) {
  // b=2, lambda=1, theta=pi/2: +-(b/2) sqrt(1 + lambda^2) = +-sqrt(2), doubly degenerate
  const DriveConfig cfg = DriveConfig::make(2.0, kPi / 2, kPi, 0.0, 1.0);
  const Eigen::Vector4d ev = sorted_eigenvalues(build_hamiltonian(cfg, 0.0));
  const double r = std::sqrt(2.0);
  EXPECT_NEAR(ev(0), -r, 1e-12);
  EXPECT_NEAR(ev(1), -r, 1e-12);
  EXPECT_NEAR(ev(2), r, 1e-12);
  EXPECT_NEAR(ev(3), r, 1e-12);
}

TEST(BuildHamiltonian, EntryStructure) {
  DriveConfig cfg = DriveConfig::make(1.7, 0.9, 0.0, 0.0, 0.4);
  cfg.phi_l = 0.3;
  cfg.phi_r = -1.1;
  const double s = 0.25;
  const Operator4 h = build_hamiltonian(cfg, s);
  EXPECT_NEAR(h(0, 0).real(), 0.5 * 1.7 * std::cos(0.9), 1e-15);
  EXPECT_NEAR(h(3, 3).real(), -0.5 * 1.7 * std::cos(0.9), 1e-15);
  EXPECT_EQ(h(0, 2), Complex(0.4, 0.0));
  EXPECT_EQ(h(1, 3), Complex(0.4, 0.0));
  EXPECT_EQ(h(0, 3), Complex(0.0, 0.0));
  const Complex flip_l = 0.5 * 1.7 * std::sin(0.9) * std::polar(1.0, -(s + 0.3));
  const Complex flip_r = 0.5 * 1.7 * std::sin(0.9) * std::polar(1.0, -(s - 1.1));
  EXPECT_LT(std::abs(h(0, 1) - flip_l), 1e-15);
  EXPECT_LT(std::abs(h(2, 3) - flip_r), 1e-15);
}

TEST(BuildHamiltonian, HermitianAndPeriodic) {
  for (int trial = 0; trial < 200; ++trial) {
    const DriveConfig cfg = random_config();
    const double s = uniform(-10.0, 10.0);
    const Operator4 h = build_hamiltonian(cfg, s);
    EXPECT_TRUE(is_hermitian(h));
    EXPECT_LT(max_abs(build_hamiltonian(cfg, s + kTwoPi) - h), 1e-12);
  }
}

TEST(BuildHamiltonian, SpectrumIndependentOfCommonDrivePhase) {
  for (int trial = 0; trial < 200; ++trial) {
    const DriveConfig cfg = random_config();
    const Eigen::Vector4d a = sorted_eigenvalues(build_hamiltonian(cfg, uniform(0.0, kTwoPi)));
    const Eigen::Vector4d b = sorted_eigenvalues(build_hamiltonian(cfg, uniform(0.0, kTwoPi)));
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(RotatingHamiltonian, ReducesToLabFrameWithoutDrive) {
  DriveConfig cfg = random_config();
  cfg.omega = 0.0;
  EXPECT_EQ(max_abs(build_rotating_hamiltonian(cfg) - build_hamiltonian(cfg, 0.0)), 0.0);
}

TEST(RotatingHamiltonian, FrameEquivalence) {
  const auto& ops = spin_site_operators();
  for (int trial = 0; trial < 200; ++trial) {
    const DriveConfig cfg = random_config();
    const double t = uniform(-5.0, 5.0);
    // U(t) = exp(-i omega t Sz_total) built here from the diagonal directly
    Operator4 u = Operator4::Zero();
    for (int k = 0; k < 4; ++k) {
      u(k, k) = std::exp(Complex(0.0, -cfg.omega * t * ops.sz_total(k, k).real()));
    }
    const Operator4 lhs = u.adjoint() * build_hamiltonian(cfg, cfg.omega * t) * u -
                          cfg.omega * ops.sz_total;
    const Operator4 rhs = build_rotating_hamiltonian(cfg);
    EXPECT_LT(max_abs(lhs - rhs), 1e-12);
    EXPECT_TRUE(is_hermitian(rhs));
    EXPECT_LT(max_abs(frame_rotation(cfg.omega * t) - u), 1e-15);
  }
}

TEST(RotatingHamiltonian, DetunedSpinBlockSpectrum) {
  // b=2, theta=pi/2, omega=3, t_lr=0: +-(b/2) sqrt(1 + mu^2) = +-sqrt(3.25)
  const DriveConfig cfg = DriveConfig::make(2.0, kPi / 2, 0.0, 3.0, 0.0);
  const Eigen::Vector4d ev = sorted_eigenvalues(build_rotating_hamiltonian(cfg));
  const double r = std::sqrt(3.25);
  EXPECT_NEAR(ev(0), -r, 1e-12);
  EXPECT_NEAR(ev(1), -r, 1e-12);
  EXPECT_NEAR(ev(2), r, 1e-12);
  EXPECT_NEAR(ev(3), r, 1e-12);
}

TEST(DriveConfig, DerivedRatios) {
  const DriveConfig cfg = DriveConfig::make(2.0, 0.3, kPi, 1.5, 1.0);
  EXPECT_DOUBLE_EQ(cfg.lambda(), 1.0);
  EXPECT_DOUBLE_EQ(cfg.mu(), 0.75);
  EXPECT_DOUBLE_EQ(cfg.delta(1), 1.75);
  EXPECT_DOUBLE_EQ(cfg.delta(-1), -0.25);
}

TEST(DriveConfig, Validation) {
  EXPECT_NO_THROW(DriveConfig::make(1.0, kPi, 0.0, 0.0, 0.0).validate());
  EXPECT_THROW(DriveConfig::make(0.0, 0.1, 0.0, 0.0, 0.0).validate(), Error);
  EXPECT_THROW(DriveConfig::make(1.0, 4.0, 0.0, 0.0, 0.0).validate(), Error);
  EXPECT_THROW(DriveConfig::make(1.0, -0.1, 0.0, 0.0, 0.0).validate(), Error);
  EXPECT_THROW(DriveConfig::make(1.0, 0.1, 0.0, -1.0, 0.0).validate(), Error);
  EXPECT_THROW(DriveConfig::make(1.0, 0.1, 0.0, 0.0, -1.0).validate(), Error);
}

TEST(PhaseBranch, Classification) {
  EXPECT_EQ(phase_branch(DriveConfig::make(1, 0, 0.0, 0, 0)), PhaseBranch::in_phase);
  EXPECT_EQ(phase_branch(DriveConfig::make(1, 0, kPi, 0, 0)), PhaseBranch::opposed);
  EXPECT_EQ(phase_branch(DriveConfig::make(1, 0, -kPi, 0, 0)), PhaseBranch::opposed);
  EXPECT_EQ(phase_branch(DriveConfig::make(1, 0, 3 * kPi, 0, 0)), PhaseBranch::opposed);
  EXPECT_EQ(phase_branch(DriveConfig::make(1, 0, kTwoPi, 0, 0)), PhaseBranch::in_phase);
  EXPECT_FALSE(phase_branch(DriveConfig::make(1, 0, 1.0, 0, 0)).has_value());
  try {
    require_phase_branch(DriveConfig::make(1, 0, 1.0, 0, 0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnsupportedPhase);
  }
  // a joint shift of both site phases keeps the branch
  DriveConfig shifted = random_branch_config(kPi);
  EXPECT_EQ(phase_branch(shifted), PhaseBranch::opposed);
}

TEST(StateLabel, IndexRoundTripAndNames) {
  for (int i = 0; i < 4; ++i) EXPECT_EQ(StateLabel::from_index(i).index(), i);
  EXPECT_EQ((StateLabel{1, -1}.name()), "m1+_m2-");
  EXPECT_EQ((StateLabel{-1, 1}.name()), "m1-_m2+");
  EXPECT_THROW((StateLabel{0, 1}.validate()), Error);
}

}  // namespace
}  // namespace qtopo
