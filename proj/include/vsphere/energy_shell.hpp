#pragma once

// Energy thresholds and the effective-energy functions E~_h(x, y) and
// E^(h, r, alpha) that bound the allowed region on each energy level.

#include <cmath>

#include "vsphere/geometry.hpp"

namespace vsphere {

struct Thresholds {
  double h1 = 0.0;  ///< (Gamma/8pi) log(2R^2): b = 2R^2 level (the line y = 0)
  double h2 = 0.0;  ///< (Gamma/4pi) log(2R): maximum of the potential
};

inline Thresholds thresholds(const Params& params) {
  const double R = params.radius;
  return {params.gamma / (8.0 * kPi) * std::log(2.0 * R * R),
          params.gamma / (4.0 * kPi) * std::log(2.0 * R)};
}

/// E~_h(x, y) = h - (Gamma/8pi) log b(x, y).
inline double e_tilde(double h, const PlanePoint& p, const Params& params) {
  const double b = coeff_b(p, params);
  if (b == 0.0) throw Error(ErrorKind::AtVortex, "E~ is singular at the vortex image");
  return h - params.k() * std::log(b);
}

/// Limit of E^ on the collision manifold r = 0: 2 Gamma R^2 / pi.
inline double collision_energy_limit(const Params& params) {
  return 2.0 * params.gamma * params.radius * params.radius / kPi;
}

/// E^ together with its partial derivatives in r and alpha.
struct EHatJet {
  double value = 0.0;
  double d_r = 0.0;
  double d_alpha = 0.0;
};

/**
 * E^(h, r, alpha) = (r^2 / l) (h - k log b), k = Gamma/8pi, written as
 * c^2 W / (8R^2) with
 *   W = r^2 (h - k log 2R^2 - 2k log r + k log c) + 2k,
 * which separates the e^{-2/r^2} factor of b analytically and stays finite
 * down to r = 0.
 */
inline EHatJet e_hat_jet(double h, double r, double alpha, const Params& params) {
  const double R2 = params.radius * params.radius;
  const double k = params.k();
  if (r == 0.0) return {collision_energy_limit(params), 0.0, 0.0};
  const BlowupPoint bp(r, alpha, params);
  const double bracket = h - k * std::log(2.0 * R2) - 2.0 * k * std::log(r) + k * std::log(bp.c);
  const double W = r * r * bracket + 2.0 * k;
  const double W_r = 2.0 * r * bracket - 2.0 * k * r + k * r * r * bp.c_r / bp.c;
  const double W_a = k * r * r * bp.c_alpha / bp.c;
  const double s = 1.0 / (8.0 * R2);
  EHatJet j;
  j.value = bp.c * bp.c * W * s;
  j.d_r = (2.0 * bp.c * bp.c_r * W + bp.c * bp.c * W_r) * s;
  j.d_alpha = (2.0 * bp.c * bp.c_alpha * W + bp.c * bp.c * W_a) * s;
  return j;
}

inline double e_hat(double h, double r, double alpha, const Params& params) {
  if (r < 0.0) throw Error(ErrorKind::DomainError, "E^ requires r >= 0");
  return e_hat_jet(h, r, alpha, params).value;
}

}  // namespace vsphere
