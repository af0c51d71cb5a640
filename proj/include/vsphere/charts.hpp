#pragma once

// Phase-space charts and the maps between them:
//   SphereAngles (phi, theta, p_phi, p_theta)
//   Plane        (x, y, p_x, p_y)
//   McGeheeTau   (r, alpha, z_x, z_y)     x = phi1(r) cos(alpha), y = phi1(r) sin(alpha) + 2R, p = z / r
//   AngularSigma (r, alpha, psi) on a fixed energy shell h

#include <array>
#include <cmath>
#include <string>
#include <variant>

#include "vsphere/energy_shell.hpp"
#include "vsphere/geometry.hpp"

namespace vsphere {

enum class Chart { SphereAngles, Plane, McGeheeTau, AngularSigma };
enum class TimeScale { PhysicalT, TauTime, SigmaTime };

inline std::string to_string(Chart c) {
  switch (c) {
    case Chart::SphereAngles: return "sphere-angles";
    case Chart::Plane: return "plane";
    case Chart::McGeheeTau: return "mcgehee-tau";
    case Chart::AngularSigma: return "angular-sigma";
  }
  return "unknown";
}

inline Chart chart_from_string(const std::string& s) {
  if (s == "sphere-angles" || s == "sphere") return Chart::SphereAngles;
  if (s == "plane") return Chart::Plane;
  if (s == "mcgehee-tau" || s == "mcgehee") return Chart::McGeheeTau;
  if (s == "angular-sigma" || s == "sigma") return Chart::AngularSigma;
  throw Error(ErrorKind::InvalidInput, "unknown chart '" + s + "'");
}

inline std::string to_string(TimeScale t) {
  switch (t) {
    case TimeScale::PhysicalT: return "t";
    case TimeScale::TauTime: return "tau";
    case TimeScale::SigmaTime: return "sigma";
  }
  return "unknown";
}

struct SphereState {
  double phi = 0.0, theta = 0.0, p_phi = 0.0, p_theta = 0.0;
  Vec<4> to_array() const { return {phi, theta, p_phi, p_theta}; }
  static SphereState from_array(const Vec<4>& v) { return {v[0], v[1], v[2], v[3]}; }
};

struct PlaneState {
  double x = 0.0, y = 0.0, px = 0.0, py = 0.0;
  Vec<4> to_array() const { return {x, y, px, py}; }
  static PlaneState from_array(const Vec<4>& v) { return {v[0], v[1], v[2], v[3]}; }
};

struct McGeheeState {
  double r = 0.0, alpha = 0.0, zx = 0.0, zy = 0.0;
  Vec<4> to_array() const { return {r, alpha, zx, zy}; }
  static McGeheeState from_array(const Vec<4>& v) { return {v[0], v[1], v[2], v[3]}; }
};

/// Angular chart on the shell K_mech = h.
struct SigmaState {
  double r = 0.0, alpha = 0.0, psi = 0.0;
  double h = 0.0;
  Vec<3> to_array() const { return {r, alpha, psi}; }
  static SigmaState from_array(const Vec<3>& v, double h) { return {v[0], v[1], v[2], h}; }
};

using ChartState = std::variant<SphereState, PlaneState, McGeheeState, SigmaState>;

inline Chart chart_of(const ChartState& s) {
  return static_cast<Chart>(s.index());
}

/**
 * Clock constant of the angular chart: d tau = kSigmaClock * sqrt(E^) d sigma.
 * With this value the collision-manifold flow reads
 * d alpha / d sigma = (Gamma/4pi) sin(psi - alpha).
 */
inline constexpr double kSigmaClock = 0.5;

// ---------------------------------------------------------------------------
// phi1 inversion

/// Unique r >= 0 with phi1(r) = v. Bisection on log(phi1(r)) - log(v), then Newton.
inline double phi1_inverse(double v) {
  if (v < 0.0 || !std::isfinite(v)) throw Error(ErrorKind::DomainError, "phi1_inverse requires v >= 0");
  if (v == 0.0) return 0.0;
  const double target = std::log(v);
  auto f = [&](double r) { return log_phi1(r) - target; };
  // log(phi1(0.03)) < -1100, below the log of any positive double.
  double lo = 0.03, hi = v + 1.0;
  while (hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid; else hi = mid;
  }
  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    const double df = 1.0 / r + 2.0 / (r * r * r);
    r -= f(r) / df;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Plane <-> McGehee

inline McGeheeState plane_to_mcgehee(const PlaneState& s, const Params& params) {
  const double dy = s.y - 2.0 * params.radius;
  const double d = std::hypot(s.x, dy);
  if (d == 0.0) throw Error(ErrorKind::AtVortex, "the vortex image has no McGehee preimage with r > 0");
  const double r = phi1_inverse(d);
  return {r, wrap_angle(std::atan2(dy, s.x)), s.px * r, s.py * r};
}

inline PlaneState mcgehee_to_plane(const McGeheeState& s, const Params& params) {
  if (!(s.r > 0.0)) throw Error(ErrorKind::CollisionState, "momenta are undefined on the collision manifold");
  const double f = phi1(s.r);
  return {f * std::cos(s.alpha), f * std::sin(s.alpha) + 2.0 * params.radius, s.zx / s.r, s.zy / s.r};
}

/// Analytic Jacobian d(r, alpha, z_x, z_y) / d(x, y, p_x, p_y) at a plane state.
inline std::array<Vec<4>, 4> plane_to_mcgehee_jacobian(const PlaneState& s, const Params& params) {
  const double dy = s.y - 2.0 * params.radius;
  const double d2 = s.x * s.x + dy * dy;
  const double d = std::sqrt(d2);
  if (d == 0.0) throw Error(ErrorKind::AtVortex, "Jacobian undefined at the vortex image");
  const double r = phi1_inverse(d);
  const double inv_dphi = 1.0 / phi1_prime(r);
  const double r_x = s.x / d * inv_dphi;
  const double r_y = dy / d * inv_dphi;
  std::array<Vec<4>, 4> J{};
  J[0] = {r_x, r_y, 0.0, 0.0};
  J[1] = {-dy / d2, s.x / d2, 0.0, 0.0};
  J[2] = {s.px * r_x, s.px * r_y, r, 0.0};
  J[3] = {s.py * r_x, s.py * r_y, 0.0, r};
  return J;
}

// ---------------------------------------------------------------------------
// McGehee <-> angular chart

/// Relative tolerance on the energy relation a z_x^2 + z_y^2 = E^.
inline constexpr double kShellTol = 1e-8;

inline SigmaState z_to_psi(const McGeheeState& s, double h, const Params& params) {
  const double E = e_hat(h, s.r, s.alpha, params);
  if (E <= 1e-14 * collision_energy_limit(params)) {
    throw Error(ErrorKind::ZeroVelocity, "E^ vanishes: psi is undefined on the zero velocity manifold");
  }
  const double a = coeffs_mcgehee(s.r, s.alpha, params).a;
  const double lhs = a * s.zx * s.zx + s.zy * s.zy;
  if (std::abs(lhs - E) > kShellTol * E) {
    throw Error(ErrorKind::OffShell, "state violates a z_x^2 + z_y^2 = E^(h, r, alpha)");
  }
  return {s.r, wrap_angle(s.alpha), wrap_angle(std::atan2(s.zy, std::sqrt(a) * s.zx)), h};
}

inline McGeheeState psi_to_z(const SigmaState& s, const Params& params) {
  const double E = e_hat(s.h, s.r, s.alpha, params);
  if (E < 0.0) throw Error(ErrorKind::ForbiddenRegion, "E^ < 0: point lies in the forbidden region");
  const double a = coeffs_mcgehee(s.r, s.alpha, params).a;
  return {s.r, s.alpha, std::sqrt(E / a) * std::cos(s.psi), std::sqrt(E) * std::sin(s.psi)};
}

// ---------------------------------------------------------------------------
// Time reparameterizations

/// d tau / d t = phi2(r) / phi1(r).
inline double dtau_dt(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "d tau / d t requires r > 0");
  return std::exp(1.0 / (r * r)) / (r * r);
}

/// d t / d tau = phi1(r) / phi2(r) = r phi1(r).
inline double dt_dtau(double r) { return r * phi1(r); }

/// d sigma / d tau = 1 / (kSigmaClock sqrt(E^)).
inline double dsigma_dtau(double h, double r, double alpha, const Params& params) {
  const double E = e_hat(h, r, alpha, params);
  if (!(E > 0.0)) throw Error(ErrorKind::ZeroVelocity, "sigma clock is undefined where E^ <= 0");
  return 1.0 / (kSigmaClock * std::sqrt(E));
}

// ---------------------------------------------------------------------------
// Sphere <-> plane cotangent lift

namespace detail {

/// Jacobian of (x, y) -> (phi, theta): rows (phi_x, phi_y), (theta_x, theta_y).
inline std::array<double, 4> angles_jacobian(double x, double y, const Params& params) {
  const double R = params.radius;
  const double rho2 = x * x + y * y;
  const double rho = std::sqrt(rho2);
  const double dtheta = 4.0 * R / (4.0 * R * R + rho2);
  return {-y / rho2, x / rho2, dtheta * x / rho, dtheta * y / rho};
}

}  // namespace detail

/// Positions by stereographic projection, momenta by p_plane = J^T p_sphere.
inline PlaneState sphere_to_plane_lift(const SphereState& s, const Params& params) {
  if (!(s.theta > 0.0 && s.theta < kPi)) throw Error(ErrorKind::PoleSingular, "lift requires theta in (0, pi)");
  const PlanePoint q = stereo_project(sphere_param({s.phi, s.theta}, params), params);
  const auto J = detail::angles_jacobian(q.x, q.y, params);
  return {q.x, q.y, J[0] * s.p_phi + J[2] * s.p_theta, J[1] * s.p_phi + J[3] * s.p_theta};
}

inline SphereState plane_to_sphere_lift(const PlaneState& s, const Params& params) {
  if (s.x == 0.0 && s.y == 0.0) throw Error(ErrorKind::PoleSingular, "lift undefined at the south pole");
  const SpherePoint p = stereo_inverse({s.x, s.y}, params);
  const auto J = detail::angles_jacobian(s.x, s.y, params);
  // Solve J^T (p_phi, p_theta) = (p_x, p_y).
  const double det = J[0] * J[3] - J[1] * J[2];
  const double p_phi = (J[3] * s.px - J[2] * s.py) / det;
  const double p_theta = (-J[1] * s.px + J[0] * s.py) / det;
  return {p.phi, p.theta, p_phi, p_theta};
}

}  // namespace vsphere
