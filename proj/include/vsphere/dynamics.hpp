#pragma once

// Vector fields of every chart, their Hamiltonians, and the A1/A2/B
// quantities of the angular chart.

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "vsphere/charts.hpp"
#include "vsphere/energy_shell.hpp"
#include "vsphere/geometry.hpp"

namespace vsphere {

enum class VortexAt { Equator, NorthPole };

enum class FieldKind {
  SphereGeodesic,
  SphereVortexEquator,
  SphereVortexNorth,
  Meridian,
  Plane,
  McGeheeTau,
  AngularSigma,
  CollisionManifold,
};

inline std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::SphereGeodesic: return "sphere-geodesic";
    case FieldKind::SphereVortexEquator: return "sphere-vortex-equator";
    case FieldKind::SphereVortexNorth: return "sphere-vortex-north";
    case FieldKind::Meridian: return "meridian";
    case FieldKind::Plane: return "plane";
    case FieldKind::McGeheeTau: return "mcgehee-tau";
    case FieldKind::AngularSigma: return "angular-sigma";
    case FieldKind::CollisionManifold: return "collision-manifold";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Sphere charts

namespace detail {

inline void check_sphere_domain(const Vec<4>& s) {
  const double theta = s[1];
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi) {
    throw Error(ErrorKind::DomainError, "theta outside [0, pi]");
  }
  if ((theta == 0.0 || theta == kPi) && s[2] != 0.0) {
    throw Error(ErrorKind::PoleSingular, "p_phi != 0 at a pole of the angular chart");
  }
}

/// p_phi^2 cos(theta) / (R^2 sin^3(theta)), exactly 0 when p_phi = 0.
inline double centrifugal(double p_phi, double theta, double R2) {
  if (p_phi == 0.0) return 0.0;
  const double st = std::sin(theta);
  return p_phi * p_phi * std::cos(theta) / (R2 * st * st * st);
}

/// p_phi / (R^2 sin^2(theta)), exactly 0 when p_phi = 0.
inline double phi_rate(double p_phi, double theta, double R2) {
  if (p_phi == 0.0) return 0.0;
  const double st = std::sin(theta);
  return p_phi / (R2 * st * st);
}

}  // namespace detail

inline Vec<4> vf_sphere_geodesic(const Vec<4>& s, const Params& params) {
  detail::check_sphere_domain(s);
  const double R2 = params.radius * params.radius;
  return {detail::phi_rate(s[2], s[1], R2), s[3] / R2, 0.0, detail::centrifugal(s[2], s[1], R2)};
}

/**
 * Canonical equations of H_geod + (Gamma/8pi) log(chord^2). With the vortex at
 * the equator point Q the chord is 2R^2(1 - sin(theta) sin(phi)); with the
 * vortex at the north pole it is 2R^2(1 + cos(theta)).
 */
inline Vec<4> vf_sphere_vortex(const Vec<4>& s, const Params& params, VortexAt at) {
  detail::check_sphere_domain(s);
  const double R2 = params.radius * params.radius;
  const double k = params.k();
  const double phi = s[0], theta = s[1];
  Vec<4> d = {detail::phi_rate(s[2], theta, R2), s[3] / R2, 0.0, detail::centrifugal(s[2], theta, R2)};
  if (at == VortexAt::Equator) {
    const double st = std::sin(theta);
    const double w = 1.0 - st * std::sin(phi);
    if (w == 0.0) throw Error(ErrorKind::AtVortex, "state is at the vortex");
    d[2] = k * st * std::cos(phi) / w;
    d[3] += k * std::cos(theta) * std::sin(phi) / w;
  } else {
    if (theta == kPi) throw Error(ErrorKind::AtVortex, "state is at the vortex");
    // sin(theta) / (1 + cos(theta)) = tan(theta/2)
    d[3] += k * std::tan(0.5 * theta);
  }
  return d;
}

/// Reduced p_phi = 0 system on a vortex meridian. theta in (-pi, pi); negative
/// theta is the opposite half of the great circle.
inline Vec<2> vf_meridian(const Vec<2>& s, const Params& params) {
  if (!std::isfinite(s[0]) || std::abs(s[0]) >= kPi) throw Error(ErrorKind::AtVortex, "meridian state at the vortex");
  return {s[1] / (params.radius * params.radius), params.k() * std::tan(0.5 * s[0])};
}

inline double hamiltonian_sphere_geodesic(const Vec<4>& s, const Params& params) {
  const double st = std::sin(s[1]);
  const double kin = (s[2] == 0.0 ? 0.0 : s[2] * s[2] / (st * st)) + s[3] * s[3];
  return kin / (2.0 * params.radius * params.radius);
}

inline double hamiltonian_sphere_vortex(const Vec<4>& s, const Params& params, VortexAt at) {
  const double R2 = params.radius * params.radius;
  const double chord2 = at == VortexAt::Equator ? 2.0 * R2 * (1.0 - std::sin(s[1]) * std::sin(s[0]))
                                                : 2.0 * R2 * (1.0 + std::cos(s[1]));
  return hamiltonian_sphere_geodesic(s, params) + params.k() * std::log(chord2);
}

/// Potential on a vortex meridian, 2k log(2R cos(theta/2)) = h2 + 2k log cos(theta/2).
inline double meridian_potential(double theta, const Params& params) {
  return 2.0 * params.k() * std::log(2.0 * params.radius * std::cos(0.5 * theta));
}

/// h - V(theta) on a meridian, accurate near the antipodal point theta = 0.
inline double meridian_kinetic(double h, double theta, const Params& params) {
  const double s = std::sin(0.25 * theta);
  const double h2 = thresholds(params).h2;
  return (h - h2) - 2.0 * params.k() * std::log1p(-2.0 * s * s);
}

inline double hamiltonian_meridian(const Vec<2>& s, const Params& params) {
  return s[1] * s[1] / (2.0 * params.radius * params.radius) + meridian_potential(s[0], params);
}

// ---------------------------------------------------------------------------
// Plane chart

inline Vec<4> vf_plane(const Vec<4>& s, const Params& params) {
  const PlanePoint p{s[0], s[1]};
  if (p.is_origin()) throw Error(ErrorKind::OriginSingular, "plane field is singular at the origin");
  if (p.is_vortex(params)) throw Error(ErrorKind::AtVortex, "plane field is singular at the vortex image");
  const double k = params.k();
  const double l = coeff_l(p, params);
  const double al = coeff_al(p, params);
  const CoeffGrads g = coeff_grads_xy(p, params);
  const double px2 = s[2] * s[2], py2 = s[3] * s[3];
  return {2.0 * al * s[2], 2.0 * l * s[3], -(g.al_x * px2 + g.l_x * py2 + k * g.logb_x),
          -(g.al_y * px2 + g.l_y * py2 + k * g.logb_y)};
}

/// K_mech = l (a p_x^2 + p_y^2) + (Gamma/8pi) log b.
inline double hamiltonian_plane(const Vec<4>& s, const Params& params) {
  const PlanePoint p{s[0], s[1]};
  return coeff_l(p, params) * s[3] * s[3] + coeff_al(p, params) * s[2] * s[2] +
         params.k() * std::log(coeff_b(p, params));
}

// ---------------------------------------------------------------------------
// McGehee tau chart

/**
 * Regularized field in (r, alpha, z_x, z_y), time d tau = (phi2/phi1) dt:
 *   r'   = 2r^3/(2+r^2) l <z, s(alpha)>_a
 *   alpha' = 2 l (z_y cos(alpha) - a z_x sin(alpha))
 *   z'   = -phi1 [(al)_q z_x^2 + l_q z_y^2] - k r^3 e^{-1/r^2} b_q/b + 2r^2/(2+r^2) l <z, s>_a z
 * with r^3 e^{-1/r^2} b_x / b = r^2 (2 cos(alpha) - 2 x phi1 / c), which is smooth at r = 0.
 */
inline Vec<4> vf_mcgehee_tau(const Vec<4>& s, const Params& params) {
  const double r = s[0], zx = s[2], zy = s[3];
  const BlowupPoint bp(r, s[1], params);
  if (bp.rho0_sq == 0.0) throw Error(ErrorKind::OriginSingular, "McGehee state maps to the plane origin");
  const double R2 = params.radius * params.radius;
  const double k = params.k();
  const double c = bp.c;
  const double l = 8.0 * R2 / (c * c);
  const double a = c * c / (16.0 * R2 * bp.rho0_sq);
  const double rho4 = bp.rho0_sq * bp.rho0_sq;
  const double al_x = -bp.x / rho4, al_y = -bp.y / rho4;
  const double l_x = -32.0 * R2 * bp.x / (c * c * c), l_y = -32.0 * R2 * bp.y / (c * c * c);
  const double pot_x = 2.0 * bp.cos_a - 2.0 * bp.x * bp.phi / c;
  const double pot_y = 2.0 * bp.sin_a - 2.0 * bp.y * bp.phi / c;
  const double r2 = r * r;
  const double pair = a * zx * bp.cos_a + zy * bp.sin_a;
  const double g = 2.0 * r2 / (2.0 + r2) * l * pair;
  return {r * g, 2.0 * l * (zy * bp.cos_a - a * zx * bp.sin_a),
          -bp.phi * (al_x * zx * zx + l_x * zy * zy) - k * r2 * pot_x + g * zx,
          -bp.phi * (al_y * zx * zx + l_y * zy * zy) - k * r2 * pot_y + g * zy};
}

/// K_mech expressed in McGehee variables (r > 0).
inline double hamiltonian_mcgehee(const Vec<4>& s, const Params& params) {
  const double r = s[0];
  if (!(r > 0.0)) throw Error(ErrorKind::CollisionState, "K_mech is unbounded on the collision manifold");
  const BlowupPoint bp(r, s[1], params);
  const CoeffBundle cb = coeffs_mcgehee(r, s[1], params);
  const double log_b = std::log(2.0 * params.radius * params.radius) + 2.0 * log_phi1(r) - std::log(bp.c);
  return cb.l * (cb.a * s[2] * s[2] + s[3] * s[3]) / (r * r) + params.k() * log_b;
}

// ---------------------------------------------------------------------------
// Angular sigma chart

struct ABTriple {
  double A1 = 0.0;
  double A2 = 0.0;
  /// sqrt(E^) d psi / d tau; d psi / d sigma = kSigmaClock * B.
  double B = 0.0;
};

namespace detail {

/// d a / d tau along the McGehee field, through a = a(c(r, alpha)).
inline double a_rate(const BlowupPoint& bp, const Vec<4>& dz, const Params& params) {
  return coeff_a_dc(bp.c, params) * (bp.c_r * dz[0] + bp.c_alpha * dz[1]);
}

}  // namespace detail

/**
 * A1, A2 and B at a McGehee state on the shell h. B comes from the chain rule
 * applied to psi = atan2(z_y, sqrt(a) z_x): with w = sqrt(a) z_x,
 * B = cos(psi) A2 - sin(psi) w', exact on the shell.
 */
inline ABTriple ab_triple(const McGeheeState& s, double h, const Params& params) {
  const SigmaState ang = z_to_psi(s, h, params);  // validates the shell
  const Vec<4> st = s.to_array();
  const Vec<4> dz = vf_mcgehee_tau(st, params);
  const BlowupPoint bp(s.r, s.alpha, params);
  const double a = coeffs_mcgehee(s.r, s.alpha, params).a;
  const double sa = std::sqrt(a);
  const double w_dot = sa * dz[2] + s.zx * detail::a_rate(bp, dz, params) / (2.0 * sa);
  return {dz[2], dz[3], std::cos(ang.psi) * dz[3] - std::sin(ang.psi) * w_dot};
}

/// B from the chain rule in quotient form: sqrt(E^) (w z_y' - z_y w') / (w^2 + z_y^2).
inline double b_chain_rule(const McGeheeState& s, double h, const Params& params) {
  z_to_psi(s, h, params);
  const Vec<4> dz = vf_mcgehee_tau(s.to_array(), params);
  const BlowupPoint bp(s.r, s.alpha, params);
  const double a = coeffs_mcgehee(s.r, s.alpha, params).a;
  const double sa = std::sqrt(a);
  const double w = sa * s.zx;
  const double w_dot = sa * dz[2] + s.zx * detail::a_rate(bp, dz, params) / (2.0 * sa);
  const double psi_dot = (w * dz[3] - s.zy * w_dot) / (w * w + s.zy * s.zy);
  return std::sqrt(e_hat(h, s.r, s.alpha, params)) * psi_dot;
}

/**
 * B by the expanded formula
 *   -sqrt(a) sin(psi) A1 + sqrt(a) sin(psi) cos(psi) d/dtau sqrt(E^/a)
 *   + A2 cos(psi) - d/dtau sqrt(E^) sin(psi) cos(psi).
 */
inline double b_displayed(const McGeheeState& s, double h, const Params& params) {
  const SigmaState ang = z_to_psi(s, h, params);
  const Vec<4> dz = vf_mcgehee_tau(s.to_array(), params);
  const BlowupPoint bp(s.r, s.alpha, params);
  const double a = coeffs_mcgehee(s.r, s.alpha, params).a;
  const EHatJet E = e_hat_jet(h, s.r, s.alpha, params);
  const double E_dot = E.d_r * dz[0] + E.d_alpha * dz[1];
  const double a_dot = detail::a_rate(bp, dz, params);
  const double sqrtE_dot = E_dot / (2.0 * std::sqrt(E.value));
  const double q = E.value / a;
  const double sqrtQ_dot = (E_dot / a - E.value * a_dot / (a * a)) / (2.0 * std::sqrt(q));
  const double sp = std::sin(ang.psi), cp = std::cos(ang.psi), sa = std::sqrt(a);
  return -sa * sp * dz[2] + sa * sp * cp * sqrtQ_dot + dz[3] * cp - sqrtE_dot * sp * cp;
}

/// f1 = sqrt(a) cos(psi) cos(alpha) + sin(psi) sin(alpha),
/// f2 = sin(psi) cos(alpha) - sqrt(a) cos(psi) sin(alpha).
inline std::array<double, 2> f_pair(double a, double alpha, double psi) {
  const double sa = std::sqrt(a);
  return {sa * std::cos(psi) * std::cos(alpha) + std::sin(psi) * std::sin(alpha),
          std::sin(psi) * std::cos(alpha) - sa * std::cos(psi) * std::sin(alpha)};
}

/**
 * Angular field on the shell h, time d tau = kSigmaClock sqrt(E^) d sigma:
 *   dr/dsigma     = r^3 E^ l f1 / (2 + r^2)
 *   dalpha/dsigma = E^ l f2
 *   dpsi/dsigma   = kSigmaClock B
 */
inline Vec<3> vf_angular_sigma(const Vec<3>& s, double h, const Params& params) {
  const double r = s[0], alpha = s[1], psi = s[2];
  if (r < 0.0) throw Error(ErrorKind::DomainError, "r must be >= 0");
  const double E = e_hat(h, r, alpha, params);
  if (E < 0.0) throw Error(ErrorKind::ForbiddenRegion, "E^ < 0: state in the forbidden region");
  const CoeffBundle cb = coeffs_mcgehee(r, alpha, params);
  const auto f = f_pair(cb.a, alpha, psi);
  const double sa = std::sqrt(cb.a);
  const Vec<4> mz = {r, alpha, std::sqrt(E) / sa * std::cos(psi), std::sqrt(E) * std::sin(psi)};
  const Vec<4> dz = vf_mcgehee_tau(mz, params);
  const BlowupPoint bp(r, alpha, params);
  const double w_dot = sa * dz[2] + mz[2] * detail::a_rate(bp, dz, params) / (2.0 * sa);
  const double B = std::cos(psi) * dz[3] - std::sin(psi) * w_dot;
  return {r * r * r * E * cb.l * f[0] / (2.0 + r * r), E * cb.l * f[1], kSigmaClock * B};
}

/// Flow on the collision manifold r = 0 in (alpha, psi).
inline Vec<2> vf_collision_manifold(const Vec<2>& s, const Params& params) {
  return {params.gamma / (4.0 * kPi) * std::sin(s[1] - s[0]), 0.0};
}

// ---------------------------------------------------------------------------
// Field objects

template <std::size_t N>
struct VectorField {
  FieldKind kind = FieldKind::Plane;
  Chart chart = Chart::Plane;
  TimeScale time_scale = TimeScale::PhysicalT;
  /// Energy level, required for the angular chart.
  std::optional<double> energy;
  std::function<Vec<N>(const Vec<N>&)> eval;
  /// Conserved Hamiltonian, empty when the chart has none.
  std::function<double(const Vec<N>&)> hamiltonian;

  Vec<N> operator()(const Vec<N>& s) const { return eval(s); }
};

inline VectorField<4> sphere_geodesic_field(const Params& params) {
  return {FieldKind::SphereGeodesic, Chart::SphereAngles, TimeScale::PhysicalT, std::nullopt,
          [params](const Vec<4>& s) { return vf_sphere_geodesic(s, params); },
          [params](const Vec<4>& s) { return hamiltonian_sphere_geodesic(s, params); }};
}

inline VectorField<4> sphere_vortex_field(const Params& params, VortexAt at) {
  return {at == VortexAt::Equator ? FieldKind::SphereVortexEquator : FieldKind::SphereVortexNorth,
          Chart::SphereAngles, TimeScale::PhysicalT, std::nullopt,
          [params, at](const Vec<4>& s) { return vf_sphere_vortex(s, params, at); },
          [params, at](const Vec<4>& s) { return hamiltonian_sphere_vortex(s, params, at); }};
}

inline VectorField<2> meridian_field(const Params& params) {
  return {FieldKind::Meridian, Chart::SphereAngles, TimeScale::PhysicalT, std::nullopt,
          [params](const Vec<2>& s) { return vf_meridian(s, params); },
          [params](const Vec<2>& s) { return hamiltonian_meridian(s, params); }};
}

inline VectorField<4> plane_field(const Params& params) {
  return {FieldKind::Plane, Chart::Plane, TimeScale::PhysicalT, std::nullopt,
          [params](const Vec<4>& s) { return vf_plane(s, params); },
          [params](const Vec<4>& s) { return hamiltonian_plane(s, params); }};
}

inline VectorField<4> mcgehee_field(const Params& params) {
  return {FieldKind::McGeheeTau, Chart::McGeheeTau, TimeScale::TauTime, std::nullopt,
          [params](const Vec<4>& s) { return vf_mcgehee_tau(s, params); },
          [params](const Vec<4>& s) { return hamiltonian_mcgehee(s, params); }};
}

inline VectorField<3> sigma_field(const Params& params, double h) {
  return {FieldKind::AngularSigma, Chart::AngularSigma, TimeScale::SigmaTime, h,
          [params, h](const Vec<3>& s) { return vf_angular_sigma(s, h, params); },
          {}};
}

inline VectorField<2> collision_field(const Params& params) {
  return {FieldKind::CollisionManifold, Chart::AngularSigma, TimeScale::SigmaTime, std::nullopt,
          [params](const Vec<2>& s) { return vf_collision_manifold(s, params); },
          {}};
}

}  // namespace vsphere
