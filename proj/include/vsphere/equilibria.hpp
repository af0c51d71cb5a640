#pragma once

// Restpoints of the angular field on the collision manifold, their numeric
// Jacobians and eigenvalues, and the heteroclinic connections P2 -> P1.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "vsphere/dynamics.hpp"
#include "vsphere/integrator.hpp"

namespace vsphere {

enum class RestFamily { P1, P2, ZvmPoint };
enum class RestClass { DegenerateSaddle, Attractor, Repeller, Other };

inline std::string to_string(RestFamily f) {
  switch (f) {
    case RestFamily::P1: return "P1";
    case RestFamily::P2: return "P2";
    case RestFamily::ZvmPoint: return "ZvmPoint";
  }
  return "Unknown";
}

inline std::string to_string(RestClass c) {
  switch (c) {
    case RestClass::DegenerateSaddle: return "DegenerateSaddle";
    case RestClass::Attractor: return "Attractor";
    case RestClass::Repeller: return "Repeller";
    case RestClass::Other: return "Other";
  }
  return "Unknown";
}

/// Eigenvalues below this magnitude are reported as exact zeros.
inline constexpr double kZeroEigen = 1e-7;

struct JacobianReport {
  std::array<Vec<3>, 3> J{};
  /// Sorted by real part.
  std::vector<std::complex<double>> eigenvalues;
  /// Eigenvector of the eigenvalue of largest magnitude.
  Vec<3> leading_vector{};
  /// |D(1e-4) - D(1e-5)| over the one-sided r column.
  double richardson_gap = 0.0;
};

struct RestPoint {
  Chart chart = Chart::AngularSigma;
  Vec<3> location{};  ///< (r, alpha, psi)
  RestFamily family = RestFamily::P1;
  std::vector<std::complex<double>> eigenvalues;
  /// From the degenerate-saddle proposition.
  RestClass classification = RestClass::DegenerateSaddle;
  /// Role inside the collision manifold: Attractor (P1) or Repeller (P2).
  RestClass collision_role = RestClass::Other;
  double residual = 0.0;
};

/**
 * Numeric Jacobian of the angular field at a point of the collision manifold:
 * central differences in alpha and psi, one-sided differences in r with steps
 * 1e-4 and 1e-5 combined by Richardson extrapolation.
 */
inline JacobianReport jacobian_eigs(const Vec<3>& at, const Params& params, double h = 0.0) {
  auto F = [&](const Vec<3>& s) { return vf_angular_sigma(s, h, params); };
  JacobianReport rep;
  const Vec<3> f0 = F(at);
  constexpr double h1 = 1e-4, h2 = 1e-5;
  Vec<3> s1 = at, s2 = at;
  s1[0] += h1;
  s2[0] += h2;
  const Vec<3> fa = F(s1), fb = F(s2);
  for (int i = 0; i < 3; ++i) {
    const double d1 = (fa[i] - f0[i]) / h1;
    const double d2 = (fb[i] - f0[i]) / h2;
    rep.J[i][0] = (h1 * d2 - h2 * d1) / (h1 - h2);
    rep.richardson_gap = std::max(rep.richardson_gap, std::abs(d1 - d2));
  }
  constexpr double hc = 1e-6;
  for (int j = 1; j < 3; ++j) {
    Vec<3> sp = at, sm = at;
    sp[j] += hc;
    sm[j] -= hc;
    const Vec<3> fp = F(sp), fm = F(sm);
    for (int i = 0; i < 3; ++i) rep.J[i][j] = (fp[i] - fm[i]) / (2.0 * hc);
  }

  Eigen::Matrix3d M;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M(i, j) = rep.J[i][j];
  Eigen::EigenSolver<Eigen::Matrix3d> es(M);
  std::vector<std::pair<std::complex<double>, Eigen::Vector3cd>> pairs;
  for (int i = 0; i < 3; ++i) {
    std::complex<double> lam = es.eigenvalues()(i);
    if (std::abs(lam.real()) < kZeroEigen) lam.real(0.0);
    if (std::abs(lam.imag()) < kZeroEigen) lam.imag(0.0);
    pairs.emplace_back(lam, es.eigenvectors().col(i));
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first.real() < b.first.real(); });
  double best = -1.0;
  for (const auto& [lam, v] : pairs) {
    rep.eigenvalues.push_back(lam);
    if (std::abs(lam) > best) {
      best = std::abs(lam);
      const Eigen::Vector3d re = v.real().normalized();
      rep.leading_vector = {re(0), re(1), re(2)};
    }
  }
  return rep;
}

/// n sampled points of each restpoint curve P1 = (0, alpha, alpha), P2 = (0, alpha, alpha + pi).
inline std::vector<RestPoint> restpoint_curves(const Params& params, int n, double h = 0.0) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "need at least one sample");
  std::vector<RestPoint> out;
  for (int i = 0; i < n; ++i) {
    const double alpha = kTwoPi * i / n;
    for (RestFamily fam : {RestFamily::P1, RestFamily::P2}) {
      RestPoint p;
      p.family = fam;
      p.location = {0.0, alpha, wrap_angle(fam == RestFamily::P1 ? alpha : alpha + kPi)};
      const Vec<3> f = vf_angular_sigma(p.location, h, params);
      p.residual = std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]);
      p.eigenvalues = jacobian_eigs(p.location, params, h).eigenvalues;
      p.collision_role = fam == RestFamily::P1 ? RestClass::Attractor : RestClass::Repeller;
      out.push_back(p);
    }
  }
  return out;
}

struct ManifoldDims {
  int stable = 0;
  int unstable = 0;
  int center = 0;
};

/// Counts from the linearization: sign of the real parts.
inline ManifoldDims linear_manifold_dims(const std::vector<std::complex<double>>& eigs) {
  ManifoldDims d;
  for (const auto& l : eigs) {
    if (l.real() < 0.0) ++d.stable;
    else if (l.real() > 0.0) ++d.unstable;
    else ++d.center;
  }
  return d;
}

/// The counts stated for the degenerate saddles, which include the nonlinear
/// r-direction behaviour that the linearization cannot see.
inline ManifoldDims saddle_manifold_dims() { return {1, 1, 1}; }

struct TransverseReport {
  double p1_rate = 0.0;  ///< dr/dsigma at (r, alpha, alpha)
  double p2_rate = 0.0;  ///< dr/dsigma at (r, alpha, alpha + pi)
};

/// dr/dsigma just off the collision manifold along each restpoint curve.
inline TransverseReport stability_transverse(const Params& params, double alpha = 0.5, double r = 1e-3,
                                             double h = 0.0) {
  return {vf_angular_sigma({r, alpha, alpha}, h, params)[0],
          vf_angular_sigma({r, alpha, alpha + kPi}, h, params)[0]};
}

struct HeteroclinicOrbit {
  double psi = 0.0;
  double u0 = 0.0;
  std::vector<double> sigma;
  std::vector<double> alpha;
  /// u = alpha - psi, unwrapped.
  std::vector<double> u;
  std::vector<double> u_closed_form;
  double max_error = 0.0;
  /// max |psi(sigma) - psi(0)|
  double psi_drift = 0.0;
  /// alpha of the source on P2 and of the sink on P1.
  double source_alpha = 0.0;
  double sink_alpha = 0.0;
  /// |u| at the last forward sample and |u - pi| at the end of the backward run.
  double forward_gap = 0.0;
  double backward_gap = 0.0;
};

/// u(sigma) = 2 arctan(tan(u0/2) e^{-Gamma sigma / 4pi}).
inline double heteroclinic_closed_form(double u0, double sigma, const Params& params) {
  return 2.0 * std::atan(std::tan(0.5 * u0) * std::exp(-params.gamma * sigma / (4.0 * kPi)));
}

/**
 * Integrate the collision-manifold flow from alpha = psi + u0 and compare with
 * the closed form at n equally spaced times in [0, sigma_end].
 */
inline HeteroclinicOrbit verify_heteroclinic(double psi, double u0, const Params& params, double sigma_end = 200.0,
                                             int n = 100) {
  if (std::abs(std::sin(u0)) < 1e-12) {
    throw Error(ErrorKind::DegenerateStart, "u0 is a restpoint of the collision flow");
  }
  u0 = angle_diff(u0, 0.0);
  HeteroclinicOrbit orb;
  orb.psi = psi;
  orb.u0 = u0;
  orb.sink_alpha = wrap_angle(psi);
  orb.source_alpha = wrap_angle(psi + kPi);

  IntegratorOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-14;
  opts.record_every = sigma_end / n;
  const auto field = collision_field(params);
  const auto fwd = integrate<2>(field, {psi + u0, psi}, 0.0, sigma_end, opts);
  for (std::size_t i = 0; i < fwd.size(); ++i) {
    const double s = fwd.times[i];
    const double u = fwd.states[i][0] - psi;
    const double uc = heteroclinic_closed_form(u0, s, params);
    orb.sigma.push_back(s);
    orb.alpha.push_back(fwd.states[i][0]);
    orb.u.push_back(u);
    orb.u_closed_form.push_back(uc);
    orb.max_error = std::max(orb.max_error, std::abs(angle_diff(u, uc)));
    orb.psi_drift = std::max(orb.psi_drift, std::abs(fwd.states[i][1] - psi));
  }
  orb.forward_gap = std::abs(angle_diff(orb.u.back(), 0.0));
  const auto bwd = integrate<2>(field, {psi + u0, psi}, 0.0, -sigma_end, opts);
  orb.backward_gap = std::abs(angle_diff(bwd.states.back()[0] - psi, kPi));
  return orb;
}

}  // namespace vsphere
