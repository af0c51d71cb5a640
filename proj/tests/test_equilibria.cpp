#include <gtest/gtest.h>

#include "oracles.hpp"
#include "vsphere/equilibria.hpp"

using namespace vsphere;

namespace {

const Params kUnit{1.0, 1.0};

double nonzero_eigen(const std::vector<std::complex<double>>& eigs) {
  double v = 0.0;
  int count = 0;
  for (const auto& l : eigs) {
    if (l != std::complex<double>(0.0, 0.0)) {
      v = l.real();
      ++count;
    }
  }
  EXPECT_EQ(count, 1);
  return v;
}

}  // namespace

TEST(Restpoints, CurvesHaveZeroResidual) {
  const auto pts = restpoint_curves(kUnit, 16);
  ASSERT_EQ(pts.size(), 32u);
  for (const auto& p : pts) {
    EXPECT_EQ(p.location[0], 0.0);
    EXPECT_LT(p.residual, 1e-10);
    EXPECT_EQ(p.eigenvalues.size(), 3u);
    EXPECT_EQ(p.classification, RestClass::DegenerateSaddle);
    const double u = angle_diff(p.location[2], p.location[1]);
    if (p.family == RestFamily::P1) {
      EXPECT_NEAR(u, 0.0, 1e-15);
      EXPECT_EQ(p.collision_role, RestClass::Attractor);
    } else {
      EXPECT_NEAR(std::abs(u), kPi, 1e-15);
      EXPECT_EQ(p.collision_role, RestClass::Repeller);
    }
  }
}

TEST(Restpoints, ShiftedFamilyMember) {
  for (const Vec<3>& at : {Vec<3>{0.0, 1.3, 1.3}, Vec<3>{0.0, 1.3, 1.3 + kPi}}) {
    const Vec<3> f = vf_angular_sigma(at, 0.0, kUnit);
    EXPECT_LT(std::hypot(f[0], f[1], f[2]), 1e-10);
  }
}

TEST(Restpoints, NoneOffTheCurves) {
  // Collision-flow residual at r = 0: dalpha/dsigma = -(Gamma/4pi) sin(alpha - psi).
  double min_res = 1e300;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double alpha = kTwoPi * i / 200.0, psi = kTwoPi * (j + 0.37) / 200.0;
      if (std::abs(std::sin(psi - alpha)) < 1e-8) continue;
      const Vec<3> f = vf_angular_sigma({0.0, alpha, psi}, 0.0, kUnit);
      const double res = std::hypot(f[0], f[1], f[2]);
      min_res = std::min(min_res, res / std::abs(std::sin(psi - alpha)));
      ASSERT_GT(res, 1e-12);
    }
  }
  EXPECT_NEAR(min_res, oracle::kEigen, 1e-9);
}

TEST(Jacobian, EigenvaluesOnBothFamilies) {
  for (double alpha : {0.0, 0.9, 2.4, 5.1}) {
    const auto e1 = jacobian_eigs({0.0, alpha, alpha}, kUnit).eigenvalues;
    const auto e2 = jacobian_eigs({0.0, alpha, alpha + kPi}, kUnit).eigenvalues;
    EXPECT_NEAR(nonzero_eigen(e1), -oracle::kEigen, 1e-5);
    EXPECT_NEAR(nonzero_eigen(e2), oracle::kEigen, 1e-5);
    for (const auto& l : e1) EXPECT_EQ(l.imag(), 0.0);
    for (const auto& l : e2) EXPECT_EQ(l.imag(), 0.0);
  }
}

TEST(Jacobian, SortedAndRichardsonStable) {
  const JacobianReport rep = jacobian_eigs({0.0, 0.7, 0.7}, kUnit);
  ASSERT_EQ(rep.eigenvalues.size(), 3u);
  EXPECT_LE(rep.eigenvalues[0].real(), rep.eigenvalues[1].real());
  EXPECT_LE(rep.eigenvalues[1].real(), rep.eigenvalues[2].real());
  EXPECT_LT(rep.richardson_gap, 1e-6);
}

TEST(Jacobian, LinearInGamma) {
  const Params twice{1.0, 2.0};
  for (const Vec<3>& at : {Vec<3>{0.0, 0.4, 0.4}, Vec<3>{0.0, 0.4, 0.4 + kPi}}) {
    const double l1 = nonzero_eigen(jacobian_eigs(at, kUnit).eigenvalues);
    const double l2 = nonzero_eigen(jacobian_eigs(at, twice).eigenvalues);
    EXPECT_NEAR(l2, 2.0 * l1, 1e-6);
  }
}

TEST(Jacobian, LeadingVectorAlongAlpha) {
  for (const Vec<3>& at : {Vec<3>{0.0, 1.0, 1.0}, Vec<3>{0.0, 1.0, 1.0 + kPi}}) {
    const Vec<3> v = jacobian_eigs(at, kUnit).leading_vector;
    const double deviation = std::acos(std::min(1.0, std::abs(v[1]) / std::hypot(v[0], v[1], v[2])));
    EXPECT_LT(deviation, 1e-4);
  }
}

TEST(ManifoldDims, LinearVersusStated) {
  const auto e1 = jacobian_eigs({0.0, 0.3, 0.3}, kUnit).eigenvalues;
  const auto e2 = jacobian_eigs({0.0, 0.3, 0.3 + kPi}, kUnit).eigenvalues;
  const ManifoldDims d1 = linear_manifold_dims(e1), d2 = linear_manifold_dims(e2);
  EXPECT_EQ(d1.stable, 1);
  EXPECT_EQ(d1.unstable, 0);
  EXPECT_EQ(d1.center, 2);
  EXPECT_EQ(d2.stable, 0);
  EXPECT_EQ(d2.unstable, 1);
  EXPECT_EQ(d2.center, 2);
  const ManifoldDims s = saddle_manifold_dims();
  EXPECT_EQ(s.stable + s.unstable + s.center, 3);
  EXPECT_EQ(s.stable, 1);
  EXPECT_EQ(s.unstable, 1);
}

TEST(Transverse, OppositeSigns) {
  const TransverseReport t = stability_transverse(kUnit, 0.5, 1e-3);
  EXPECT_GT(t.p1_rate, 0.0);
  EXPECT_LT(t.p2_rate, 0.0);
  EXPECT_NEAR(std::abs(t.p1_rate), std::abs(t.p2_rate), 1e-6);
  for (double alpha : {0.0, 1.7, 3.3, 4.9}) {
    const TransverseReport s = stability_transverse(kUnit, alpha, 1e-3);
    EXPECT_GT(s.p1_rate, 0.0);
    EXPECT_LT(s.p2_rate, 0.0);
  }
}

TEST(Heteroclinic, ClosedFormAtQuarterTurn) {
  const HeteroclinicOrbit orb = verify_heteroclinic(0.4, kPi / 2, kUnit, 200.0, 100);
  EXPECT_GE(orb.sigma.size(), 100u);
  EXPECT_LT(orb.max_error, 1e-8);
  EXPECT_EQ(orb.psi_drift, 0.0);
  for (std::size_t i = 0; i < orb.sigma.size(); ++i) {
    EXPECT_NEAR(orb.u[i], oracle::heteroclinic_u(kPi / 2, orb.sigma[i], 1.0), 1e-8);
  }
  EXPECT_NEAR(orb.sink_alpha, 0.4, 1e-15);
  EXPECT_NEAR(orb.source_alpha, 0.4 + kPi, 1e-15);
  EXPECT_LT(orb.forward_gap, 1e-6);
  EXPECT_LT(orb.backward_gap, 1e-6);
}

TEST(Heteroclinic, StartNearRepeller) {
  const double u0 = kPi - 0.01;
  const HeteroclinicOrbit orb = verify_heteroclinic(0.0, u0, kUnit, 200.0, 100);
  EXPECT_LT(orb.max_error, 1e-8);
  // From pi - 0.01 the decay needs about 4pi log(tan(u0/2) / 5e-7) ~ 248 time units to reach 1e-6.
  EXPECT_NEAR(orb.u.back(), oracle::kU200, 1e-10);
  const HeteroclinicOrbit longer = verify_heteroclinic(0.0, u0, kUnit, 300.0, 100);
  EXPECT_NEAR(longer.u.back(), oracle::kU300, 1e-12);
  EXPECT_LT(std::abs(longer.u.back()), 1e-6);
}

TEST(Heteroclinic, LinesParallelToAlphaAxis) {
  for (double psi : {-2.0, 0.0, 1.1, 3.0}) {
    for (double u0 : {0.3, 2.0, 4.0, 5.9}) {
      const HeteroclinicOrbit orb = verify_heteroclinic(psi, u0, kUnit, 250.0, 50);
      EXPECT_EQ(orb.psi_drift, 0.0);
      EXPECT_LT(orb.max_error, 1e-8);
      EXPECT_LT(orb.forward_gap, 1e-6);
      EXPECT_LT(orb.backward_gap, 1e-6);
    }
  }
}

TEST(Heteroclinic, DegenerateStart) {
  for (double u0 : {0.0, kPi, -kPi, kTwoPi}) {
    try {
      verify_heteroclinic(0.0, u0, kUnit);
      FAIL() << u0;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::DegenerateStart);
    }
  }
}
