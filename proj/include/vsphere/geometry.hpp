#pragma once

// Sphere parameterization, stereographic projection and the metric/potential
// coefficient functions a, l, b (and their products and gradients), both in
// plane Cartesian coordinates and in blown-up (r, alpha) coordinates.

#include <algorithm>
#include <cmath>

#include "vsphere/params.hpp"

namespace vsphere {

using Point3 = Vec<3>;

/// Below this radius e^{-1/r^2} underflows and phi1 is taken as exactly 0.
inline constexpr double kSmallR = 0.02;

struct SpherePoint {
  double phi = 0.0;
  double theta = 0.0;

  /// Wraps phi into [0, 2pi) and clamps theta into [0, pi] (tolerance 1e-12).
  static SpherePoint normalized(double phi, double theta) {
    constexpr double tol = 1e-12;
    if (theta < -tol || theta > kPi + tol || !std::isfinite(theta)) {
      throw Error(ErrorKind::DomainError, "theta outside [0, pi]");
    }
    return {wrap_angle(phi), std::clamp(theta, 0.0, kPi)};
  }
};

struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  bool is_origin() const { return x == 0.0 && y == 0.0; }
  bool is_vortex(const Params& p) const { return x == 0.0 && y == 2.0 * p.radius; }
};

// ---------------------------------------------------------------------------
// Embedding and projection

inline Point3 sphere_param(const SpherePoint& p, const Params& params) {
  const double R = params.radius;
  const double st = std::sin(p.theta);
  return {R * st * std::cos(p.phi), R * st * std::sin(p.phi), R * (1.0 - std::cos(p.theta))};
}

inline PlanePoint stereo_project(const Point3& P, const Params& params) {
  const double R = params.radius;
  const double denom = 2.0 * R - P[2];
  if (std::abs(denom) <= 1e-12 * R) {
    throw Error(ErrorKind::NorthPole, "the north pole has no stereographic image");
  }
  const double s = 2.0 * R / denom;
  return {s * P[0], s * P[1]};
}

inline SpherePoint stereo_inverse(const PlanePoint& p, const Params& params) {
  if (p.is_origin()) return {0.0, 0.0};
  const double rho = std::hypot(p.x, p.y);
  return {wrap_angle(std::atan2(p.y, p.x)), 2.0 * std::atan(rho / (2.0 * params.radius))};
}

/// Squared chord distance from p to the vortex Q = (0, R, R).
inline double chord_sq(const SpherePoint& p, const Params& params) {
  const double R = params.radius;
  return 2.0 * R * R * (1.0 - std::sin(p.theta) * std::sin(p.phi));
}

/**
 * Great-circle distance between two points given as vectors relative to the
 * center of a sphere of radius r. Uses atan2(|a x b|, a.b), which equals
 * r*acos(<a,b>/r^2) on the sphere but keeps full precision near 0 and pi.
 */
inline double geodesic_distance(const Point3& a, const Point3& b, double r) {
  const double tol = 1e-9 * std::max(1.0, r);
  auto norm = [](const Point3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); };
  if (std::abs(norm(a) - r) > tol || std::abs(norm(b) - r) > tol) {
    throw Error(ErrorKind::OffSphere, "point is not on the sphere of the given radius");
  }
  const Point3 cr = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  return r * std::atan2(norm(cr), dot);
}

// ---------------------------------------------------------------------------
// Coefficients in plane coordinates

/// The metric and potential coefficients at one point. `c` is 4R^2 + x^2 + y^2,
/// which coincides with c(r, s) under the blow-up substitution.
struct CoeffBundle {
  double a = 0.0;
  double l = 0.0;
  double b = 0.0;
  double al = 0.0;
  double c = 0.0;
};

inline double coeff_l(const PlanePoint& p, const Params& params) {
  const double R = params.radius;
  const double D = 4.0 * R * R + p.x * p.x + p.y * p.y;
  return 8.0 * R * R / (D * D);
}

inline double coeff_b(const PlanePoint& p, const Params& params) {
  const double R = params.radius;
  const double D = 4.0 * R * R + p.x * p.x + p.y * p.y;
  const double dy = p.y - 2.0 * R;
  return 2.0 * R * R * (p.x * p.x + dy * dy) / D;
}

inline double coeff_a(const PlanePoint& p, const Params& params) {
  if (p.is_origin()) throw Error(ErrorKind::OriginSingular, "a(x, y) is singular at the origin");
  const double R = params.radius;
  const double rho2 = p.x * p.x + p.y * p.y;
  const double D = 4.0 * R * R + rho2;
  return D * D / (16.0 * R * R * rho2);
}

inline double coeff_al(const PlanePoint& p, const Params&) {
  if (p.is_origin()) throw Error(ErrorKind::OriginSingular, "a*l is singular at the origin");
  return 1.0 / (2.0 * (p.x * p.x + p.y * p.y));
}

inline CoeffBundle coeffs_xy(const PlanePoint& p, const Params& params) {
  const double R = params.radius;
  return {coeff_a(p, params), coeff_l(p, params), coeff_b(p, params), coeff_al(p, params),
          4.0 * R * R + p.x * p.x + p.y * p.y};
}

/// Partial derivatives with respect to the plane coordinates.
struct CoeffGrads {
  double al_x = 0.0, al_y = 0.0;
  double l_x = 0.0, l_y = 0.0;
  double b_x = 0.0, b_y = 0.0;
  /// b_x / b and b_y / b; infinite at the vortex.
  double logb_x = 0.0, logb_y = 0.0;
};

inline CoeffGrads coeff_grads_xy(const PlanePoint& p, const Params& params) {
  if (p.is_origin()) throw Error(ErrorKind::OriginSingular, "grad(a*l) is singular at the origin");
  const double R = params.radius, R2 = R * R;
  const double x = p.x, y = p.y;
  const double rho2 = x * x + y * y;
  const double D = 4.0 * R2 + rho2;
  const double D2 = D * D;
  const double dy = y - 2.0 * R;
  const double q = x * x + dy * dy;

  CoeffGrads g;
  g.al_x = -x / (rho2 * rho2);
  g.al_y = -y / (rho2 * rho2);
  g.l_x = -32.0 * R2 * x / (D2 * D);
  g.l_y = -32.0 * R2 * y / (D2 * D);
  g.b_x = 16.0 * R2 * R * x * y / D2;
  g.b_y = 8.0 * R2 * R * (y * y - x * x - 4.0 * R2) / D2;
  g.logb_x = 2.0 * x / q - 2.0 * x / D;
  g.logb_y = 2.0 * dy / q - 2.0 * y / D;
  return g;
}

// ---------------------------------------------------------------------------
// Radial blow-up functions

inline double phi1(double r) {
  if (r < 0.0) throw Error(ErrorKind::DomainError, "phi1 requires r >= 0");
  if (r == 0.0) return 0.0;
  return r * std::exp(-1.0 / (r * r));
}

inline double phi2(double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "phi2 requires r > 0");
  return 1.0 / r;
}

inline double phi1_prime(double r) {
  if (r < 0.0) throw Error(ErrorKind::DomainError, "phi1' requires r >= 0");
  if (r == 0.0) return 0.0;
  const double r2 = r * r;
  return std::exp(-1.0 / r2) * (1.0 + 2.0 / r2);
}

/// log(phi1(r)) without underflow.
inline double log_phi1(double r) { return std::log(r) - 1.0 / (r * r); }

/**
 * Blown-up position x = phi1 cos(alpha), y = phi1 sin(alpha) + 2R together
 * with c = 8R^2 + phi1^2 + 4R phi1 sin(alpha) and its r/alpha derivatives.
 */
struct BlowupPoint {
  double r = 0.0, alpha = 0.0;
  double phi = 0.0, dphi = 0.0;
  double cos_a = 1.0, sin_a = 0.0;
  double x = 0.0, y = 0.0;
  double c = 0.0, c_r = 0.0, c_alpha = 0.0;
  /// x^2 + y^2 = c - 4R^2.
  double rho0_sq = 0.0;

  BlowupPoint(double r_, double alpha_, const Params& params) : r(r_), alpha(alpha_) {
    if (r < 0.0 || !std::isfinite(r)) throw Error(ErrorKind::DomainError, "r must be >= 0");
    const double R = params.radius;
    if (r >= kSmallR) {
      phi = phi1(r);
      dphi = phi1_prime(r);
    }
    cos_a = std::cos(alpha);
    sin_a = std::sin(alpha);
    x = phi * cos_a;
    y = phi * sin_a + 2.0 * R;
    c = 8.0 * R * R + phi * phi + 4.0 * R * phi * sin_a;
    c_r = (2.0 * phi + 4.0 * R * sin_a) * dphi;
    c_alpha = 4.0 * R * phi * cos_a;
    rho0_sq = 4.0 * R * R + phi * phi + 4.0 * R * phi * sin_a;
  }
};

/// Coefficients at blown-up coordinates; exact limits a=1, b=0, l=1/(8R^2) at r=0.
inline CoeffBundle coeffs_mcgehee(double r, double alpha, const Params& params) {
  const BlowupPoint bp(r, alpha, params);
  const double R2 = params.radius * params.radius;
  CoeffBundle cb;
  cb.c = bp.c;
  cb.l = 8.0 * R2 / (bp.c * bp.c);
  cb.a = bp.c * bp.c / (16.0 * R2 * bp.rho0_sq);
  cb.al = 1.0 / (2.0 * bp.rho0_sq);
  cb.b = 2.0 * R2 * bp.phi * bp.phi / bp.c;
  return cb;
}

/// d a / d c for a = c^2 / (16 R^2 (c - 4R^2)).
inline double coeff_a_dc(double c, const Params& params) {
  const double R2 = params.radius * params.radius;
  const double m = c - 4.0 * R2;
  return c * (c - 8.0 * R2) / (16.0 * R2 * m * m);
}

}  // namespace vsphere
