#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vsphere/geometry.hpp"

using namespace vsphere;

namespace {

const Params kUnit{1.0, 1.0};

void expect_point(const Point3& p, double x, double y, double z, double tol = 1e-14) {
  EXPECT_NEAR(p[0], x, tol);
  EXPECT_NEAR(p[1], y, tol);
  EXPECT_NEAR(p[2], z, tol);
}

}  // namespace

TEST(Params, RejectsNonPositive) {
  EXPECT_THROW(Params(0.0, 1.0), Error);
  EXPECT_THROW(Params(1.0, -1.0), Error);
  EXPECT_THROW(Params(1.0, std::nan("")), Error);
}

TEST(SphereParam, KnownPoints) {
  expect_point(sphere_param({0.0, 0.0}, kUnit), 0.0, 0.0, 0.0);
  expect_point(sphere_param({kPi / 2, kPi / 2}, kUnit), 0.0, 1.0, 1.0);
  expect_point(sphere_param({0.0, kPi / 2}, kUnit), 1.0, 0.0, 1.0);
}

TEST(StereoProject, KnownPoints) {
  auto p = stereo_project({0.0, 0.0, 0.0}, kUnit);
  EXPECT_DOUBLE_EQ(p.x, 0.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  p = stereo_project({0.0, 1.0, 1.0}, kUnit);
  EXPECT_DOUBLE_EQ(p.x, 0.0);
  EXPECT_DOUBLE_EQ(p.y, 2.0);
  p = stereo_project({1.0, 0.0, 1.0}, kUnit);
  EXPECT_DOUBLE_EQ(p.x, 2.0);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
}

TEST(StereoProject, NorthPoleRaises) {
  try {
    stereo_project({0.0, 0.0, 2.0}, kUnit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NorthPole);
  }
}

TEST(StereoInverse, KnownPoints) {
  auto s = stereo_inverse({0.0, 2.0}, kUnit);
  EXPECT_NEAR(s.phi, kPi / 2, 1e-15);
  EXPECT_NEAR(s.theta, kPi / 2, 1e-15);
  s = stereo_inverse({0.0, 0.0}, kUnit);
  EXPECT_EQ(s.phi, 0.0);
  EXPECT_EQ(s.theta, 0.0);
  s = stereo_inverse({2.0, 0.0}, kUnit);
  EXPECT_NEAR(s.phi, 0.0, 1e-15);
  EXPECT_NEAR(s.theta, kPi / 2, 1e-15);
}

TEST(StereoInverse, RoundTripOnRandomPoints) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Params p{1.7, 1.0};
  for (int i = 0; i < 1000; ++i) {
    const SpherePoint s{1e-3 + (kTwoPi - 2e-3) * U(rng), 1e-3 + (kPi - 2e-3) * U(rng)};
    const SpherePoint back = stereo_inverse(stereo_project(sphere_param(s, p), p), p);
    EXPECT_NEAR(angle_diff(back.phi, s.phi), 0.0, 1e-10);
    EXPECT_NEAR(back.theta, s.theta, 1e-10);
  }
}

TEST(SpherePoint, Normalization) {
  const auto s = SpherePoint::normalized(-kPi / 2, kPi + 1e-13);
  EXPECT_NEAR(s.phi, 1.5 * kPi, 1e-15);
  EXPECT_EQ(s.theta, kPi);
  EXPECT_THROW(SpherePoint::normalized(0.0, 3.5), Error);
}

TEST(ChordSq, KnownValues) {
  EXPECT_NEAR(chord_sq({kPi / 2, kPi / 2}, kUnit), 0.0, 1e-15);
  EXPECT_NEAR(chord_sq({1.5 * kPi, kPi / 2}, kUnit), 4.0, 1e-15);
  EXPECT_NEAR(chord_sq({0.0, kPi / 2}, kUnit), 2.0, 1e-15);
}

TEST(ChordSq, MatchesEmbeddedDistance) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const Params p{1.3, 1.0};
  for (int i = 0; i < 200; ++i) {
    const double phi = kTwoPi * U(rng), theta = kPi * U(rng);
    EXPECT_NEAR(chord_sq({phi, theta}, p), oracle::chord_sq_embedded(phi, theta, p.radius), 1e-12);
  }
}

TEST(GeodesicDistance, KnownValues) {
  EXPECT_NEAR(geodesic_distance({0, 0, 1}, {0, 0, 1}, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(geodesic_distance({0, 0, 1}, {0, 0, -1}, 1.0), kPi, 1e-15);
  EXPECT_NEAR(geodesic_distance({1, 0, 0}, {0, 1, 0}, 1.0), kPi / 2, 1e-15);
  EXPECT_NEAR(geodesic_distance({2, 0, 0}, {0, 0, 2}, 2.0), kPi, 1e-15);
}

TEST(GeodesicDistance, OffSphereRaises) {
  try {
    geodesic_distance({1.1, 0, 0}, {0, 1, 0}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OffSphere);
  }
}

TEST(Coefficients, KnownValues) {
  auto cb = coeffs_xy({0.0, 2.0}, kUnit);
  EXPECT_NEAR(cb.a, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(coeff_l({0.0, 0.0}, kUnit), 0.5);
  EXPECT_DOUBLE_EQ(coeff_b({0.0, 0.0}, kUnit), 2.0);
  for (double x : {-7.0, -1.0, 0.3, 2.0, 40.0}) EXPECT_NEAR(coeff_b({x, 0.0}, kUnit), 2.0, 1e-14);
}

TEST(Coefficients, OriginRaisesForA) {
  try {
    coeffs_xy({0.0, 0.0}, kUnit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OriginSingular);
  }
  EXPECT_THROW(coeff_grads_xy({0.0, 0.0}, kUnit), Error);
}

TEST(Coefficients, MatchDefinitionsAndProduct) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  const Params p{0.8, 1.0};
  for (int i = 0; i < 500; ++i) {
    const double x = U(rng), y = U(rng);
    const CoeffBundle cb = coeffs_xy({x, y}, p);
    EXPECT_NEAR(cb.a / oracle::a_xy(x, y, p.radius), 1.0, 1e-13);
    EXPECT_NEAR(cb.l / oracle::l_xy(x, y, p.radius), 1.0, 1e-13);
    EXPECT_NEAR(cb.b, oracle::b_xy(x, y, p.radius), 1e-13);
    EXPECT_NEAR(cb.al / (cb.a * cb.l), 1.0, 1e-12);
  }
}

TEST(Coefficients, BStaysInRange) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-50.0, 50.0);
  double best = 0.0, bx = 0.0, by = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = U(rng), y = U(rng);
    const double b = coeff_b({x, y}, kUnit);
    ASSERT_GE(b, 0.0);
    ASSERT_LE(b, 4.0 + 1e-12);
    if (b > best) best = b, bx = x, by = y;
  }
  EXPECT_NEAR(coeff_b({0.0, -2.0}, kUnit), 4.0, 1e-15);
  if (best > 3.99) {
    EXPECT_LT(std::hypot(bx, by + 2.0), 0.5);
  }
}

TEST(CoefficientGradients, KnownValues) {
  EXPECT_EQ(coeff_grads_xy({0.0, 1.0}, kUnit).l_x, 0.0);
  const double fd_b = oracle::central([](double y) { return oracle::b_xy(0.0, y, 1.0); }, 4.0, 1e-5);
  EXPECT_NEAR(fd_b, 0.24, 1e-9);
  EXPECT_NEAR(coeff_grads_xy({0.0, 4.0}, kUnit).b_y, 0.24, 1e-14);
  EXPECT_NEAR(coeff_grads_xy({1.0, 0.0}, kUnit).al_x, -1.0, 1e-15);
}

TEST(CoefficientGradients, MatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-4.0, 4.0);
  const Params p{1.2, 1.0};
  const double R = p.radius;
  int checked = 0;
  while (checked < 1000) {
    const double x = U(rng), y = U(rng);
    if (std::hypot(x, y) < 0.2 || std::hypot(x, y - 2.0 * R) < 0.2) continue;
    ++checked;
    const CoeffGrads g = coeff_grads_xy({x, y}, p);
    const double hx = 1e-6 * std::max(1.0, std::abs(x)), hy = 1e-6 * std::max(1.0, std::abs(y));
    auto al = [&](double xx, double yy) { return oracle::a_xy(xx, yy, R) * oracle::l_xy(xx, yy, R); };
    auto rel = [](double got, double want) { return std::abs(got - want) / std::max(1e-3, std::abs(want)); };
    EXPECT_LT(rel(g.al_x, oracle::central([&](double v) { return al(v, y); }, x, hx)), 1e-6);
    EXPECT_LT(rel(g.al_y, oracle::central([&](double v) { return al(x, v); }, y, hy)), 1e-6);
    EXPECT_LT(rel(g.l_x, oracle::central([&](double v) { return oracle::l_xy(v, y, R); }, x, hx)), 1e-6);
    EXPECT_LT(rel(g.l_y, oracle::central([&](double v) { return oracle::l_xy(x, v, R); }, y, hy)), 1e-6);
    EXPECT_LT(rel(g.b_x, oracle::central([&](double v) { return oracle::b_xy(v, y, R); }, x, hx)), 1e-6);
    EXPECT_LT(rel(g.b_y, oracle::central([&](double v) { return oracle::b_xy(x, v, R); }, y, hy)), 1e-6);
    const double b = oracle::b_xy(x, y, R);
    EXPECT_LT(rel(g.logb_x, g.b_x / b), 1e-10);
    EXPECT_LT(rel(g.logb_y, g.b_y / b), 1e-10);
  }
}

TEST(BlowupFunctions, Values) {
  EXPECT_NEAR(phi1(1.0), oracle::kPhi1At1, 1e-16);
  EXPECT_EQ(phi1(0.0), 0.0);
  EXPECT_EQ(phi1(1e-3), 0.0);
  EXPECT_DOUBLE_EQ(phi2(2.0), 0.5);
  EXPECT_THROW(phi2(0.0), Error);
  EXPECT_THROW(phi1(-1.0), Error);
}

TEST(BlowupFunctions, Phi1IsIncreasing) {
  double prev = 0.0;
  for (double r = 0.05; r < 50.0; r *= 1.05) {
    EXPECT_GT(phi1_prime(r), 0.0);
    const double v = phi1(r);
    EXPECT_GT(v, prev);
    prev = v;
    EXPECT_NEAR(phi1_prime(r), oracle::central(oracle::phi1, r, 1e-7 * r), 1e-6 * phi1_prime(r));
  }
}

TEST(McGeheeCoefficients, CollisionLimits) {
  for (double alpha : {0.0, 1.0, 2.5, 4.0}) {
    const CoeffBundle cb = coeffs_mcgehee(0.0, alpha, kUnit);
    EXPECT_EQ(cb.a, 1.0);
    EXPECT_EQ(cb.l, 0.125);
    EXPECT_EQ(cb.c, 8.0);
    EXPECT_EQ(cb.b, 0.0);
  }
}

TEST(McGeheeCoefficients, KnownB) {
  EXPECT_NEAR(coeffs_mcgehee(1.0, kPi / 2, kUnit).b, oracle::kBAtR1Alpha90, 1e-16);
}

TEST(McGeheeCoefficients, AgreeWithPlaneCoefficients) {
  const Params p{1.4, 1.0};
  for (double r : {0.5, 1.0, 2.0}) {
    for (double alpha : {0.1, 1.7, 3.3, 5.0}) {
      const double x = oracle::phi1(r) * std::cos(alpha), y = oracle::phi1(r) * std::sin(alpha) + 2.0 * p.radius;
      const CoeffBundle m = coeffs_mcgehee(r, alpha, p);
      EXPECT_NEAR(m.a / oracle::a_xy(x, y, p.radius), 1.0, 1e-12);
      EXPECT_NEAR(m.l / oracle::l_xy(x, y, p.radius), 1.0, 1e-12);
      EXPECT_NEAR(m.b / oracle::b_xy(x, y, p.radius), 1.0, 1e-10);
    }
  }
}

TEST(McGeheeCoefficients, SmallRLimitsOfDerivatives) {
  // a -> 1 with vanishing r and alpha derivatives.
  for (double r : {0.1, 0.05}) {
    const double da_r = oracle::central([&](double v) { return coeffs_mcgehee(v, 0.7, kUnit).a; }, r, 1e-5);
    const double da_al = oracle::central([&](double v) { return coeffs_mcgehee(r, v, kUnit).a; }, 0.7, 1e-5);
    EXPECT_LT(std::abs(da_r), 1e-20);
    EXPECT_LT(std::abs(da_al), 1e-20);
  }
}
