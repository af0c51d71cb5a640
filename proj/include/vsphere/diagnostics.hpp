#pragma once

// Consistency diagnostics: symplectic-gradient and pushforward checks, the
// r -> 0 limit table, the sphere/plane lift comparison and the alternate
// normalisations of some printed formulas.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "vsphere/charts.hpp"
#include "vsphere/dynamics.hpp"

namespace vsphere {

/**
 * Max relative deviation between a 2-degree-of-freedom field and the
 * central-difference symplectic gradient (dH/dp, -dH/dq) of H.
 */
inline double symplectic_gradient_error(const std::function<double(const Vec<4>&)>& H,
                                        const std::function<Vec<4>(const Vec<4>&)>& F, const Vec<4>& s,
                                        double rel_step = 1e-6) {
  Vec<4> grad{};
  for (int i = 0; i < 4; ++i) {
    const double step = rel_step * std::max(1.0, std::abs(s[i]));
    Vec<4> sp = s, sm = s;
    sp[i] += step;
    sm[i] -= step;
    grad[i] = (H(sp) - H(sm)) / (2.0 * step);
  }
  const Vec<4> expect = {grad[2], grad[3], -grad[0], -grad[1]};
  const Vec<4> got = F(s);
  double scale = 0.0, diff = 0.0;
  for (int i = 0; i < 4; ++i) {
    scale = std::max(scale, std::abs(expect[i]));
    diff = std::max(diff, std::abs(expect[i] - got[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

/// Plane field pushed to McGehee coordinates by the analytic Jacobian, times dt/dtau.
inline Vec<4> pushforward_plane_field(const McGeheeState& s, const Params& params) {
  const PlaneState p = mcgehee_to_plane(s, params);
  const auto J = plane_to_mcgehee_jacobian(p, params);
  const Vec<4> v = vf_plane(p.to_array(), params);
  const double f = dt_dtau(s.r);
  Vec<4> out{};
  for (int i = 0; i < 4; ++i) {
    double acc = 0.0;
    for (int j = 0; j < 4; ++j) acc += J[i][j] * v[j];
    out[i] = acc * f;
  }
  return out;
}

/// max-norm relative gap between the pushed plane field and vf_mcgehee_tau.
inline double pushforward_residual(const McGeheeState& s, const Params& params) {
  const Vec<4> a = pushforward_plane_field(s, params);
  const Vec<4> b = vf_mcgehee_tau(s.to_array(), params);
  double scale = 0.0, diff = 0.0;
  for (int i = 0; i < 4; ++i) {
    scale = std::max(scale, std::abs(b[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return scale > 0.0 ? diff / scale : diff;
}

// ---------------------------------------------------------------------------
// r -> 0 limits

struct LimitRow {
  double r = 0.0;
  double a_minus_1 = 0.0;
  double b = 0.0;
  double l_minus_limit = 0.0;  ///< l - 1/(8R^2)
  double A1 = 0.0, A2 = 0.0, B = 0.0;
  double potential_x = 0.0;   ///< r^3 e^{-1/r^2} b_x / b
  double potential_y = 0.0;
  double e_hat_gap = 0.0;     ///< E^ - 2 Gamma R^2 / pi
  double zx_gap = 0.0;        ///< z_x - sqrt(L0) cos(psi)
  double zy_gap = 0.0;        ///< z_y - sqrt(L0) sin(psi)
};

/// Quantities with known r -> 0 limits at a fixed (alpha, psi) on the shell h.
inline LimitRow limit_row(double r, double alpha, double psi, double h, const Params& params) {
  LimitRow row;
  row.r = r;
  const double R2 = params.radius * params.radius;
  const CoeffBundle cb = coeffs_mcgehee(r, alpha, params);
  row.a_minus_1 = cb.a - 1.0;
  row.b = cb.b;
  row.l_minus_limit = cb.l - 1.0 / (8.0 * R2);
  const McGeheeState z = psi_to_z({r, alpha, psi, h}, params);
  const ABTriple ab = ab_triple(z, h, params);
  row.A1 = ab.A1;
  row.A2 = ab.A2;
  row.B = ab.B;
  const BlowupPoint bp(r, alpha, params);
  row.potential_x = r * r * (2.0 * bp.cos_a - 2.0 * bp.x * bp.phi / bp.c);
  row.potential_y = r * r * (2.0 * bp.sin_a - 2.0 * bp.y * bp.phi / bp.c);
  const double L0 = collision_energy_limit(params);
  row.e_hat_gap = e_hat(h, r, alpha, params) - L0;
  row.zx_gap = z.zx - std::sqrt(L0) * std::cos(psi);
  row.zy_gap = z.zy - std::sqrt(L0) * std::sin(psi);
  return row;
}

inline std::vector<LimitRow> limit_table(const std::vector<double>& radii, double alpha, double psi, double h,
                                         const Params& params) {
  std::vector<LimitRow> rows;
  for (double r : radii) rows.push_back(limit_row(r, alpha, psi, h, params));
  return rows;
}

// ---------------------------------------------------------------------------
// Alternate normalisations

struct AlternateForms {
  /// Ratio of the force k sin/(2R^2 (1 + cos)) to the canonical k sin/(1 + cos).
  double north_force_ratio = 0.0;
  /// d alpha / d tau of the pushed plane field divided by l (z_y cos - a z_x sin):
  /// 2 for a consistent factor 2, 1 for the half-rate form.
  double alpha_rate_ratio = 0.0;
  /// E^ at small r and the two candidate limits 2 Gamma R^2/pi and 4 Gamma R^4/pi.
  double e_hat_small_r = 0.0;
  double limit_2GR2_over_pi = 0.0;
  double limit_4GR4_over_pi = 0.0;
};

inline AlternateForms alternate_forms(const Params& params) {
  AlternateForms out;
  const double R2 = params.radius * params.radius;
  out.north_force_ratio = 1.0 / (2.0 * R2);
  const McGeheeState s{1.1, 0.8, 0.3, -0.45};
  const Vec<4> pushed = pushforward_plane_field(s, params);
  const CoeffBundle cb = coeffs_mcgehee(s.r, s.alpha, params);
  out.alpha_rate_ratio = pushed[1] / (cb.l * (s.zy * std::cos(s.alpha) - cb.a * s.zx * std::sin(s.alpha)));
  out.e_hat_small_r = e_hat(0.0, 1e-4, 0.3, params);
  out.limit_2GR2_over_pi = 2.0 * params.gamma * R2 / kPi;
  out.limit_4GR4_over_pi = 4.0 * params.gamma * R2 * R2 / kPi;
  return out;
}

/// Sphere vortex field (vortex on the equator) pushed through the cotangent
/// lift, compared with vf_plane; reported, not asserted.
struct LiftReport {
  double position_gap = 0.0;  ///< relative gap of (x', y')
  double momentum_gap = 0.0;  ///< relative gap of (p_x', p_y')
};

inline LiftReport lift_consistency(const SphereState& s, const Params& params, double dt = 1e-6) {
  auto lift = [&](const SphereState& q) { return sphere_to_plane_lift(q, params).to_array(); };
  const Vec<4> f = vf_sphere_vortex(s.to_array(), params, VortexAt::Equator);
  Vec<4> sp = s.to_array(), sm = s.to_array();
  for (int i = 0; i < 4; ++i) {
    sp[i] += dt * f[i];
    sm[i] -= dt * f[i];
  }
  const Vec<4> a = lift(SphereState::from_array(sp)), b = lift(SphereState::from_array(sm));
  const Vec<4> p = lift(s);
  const Vec<4> g = vf_plane(p, params);
  LiftReport rep;
  auto gap = [&](int i0) {
    double d = 0.0, sc = 0.0;
    for (int i = i0; i < i0 + 2; ++i) {
      const double pushed = (a[i] - b[i]) / (2.0 * dt);
      d = std::max(d, std::abs(pushed - g[i]));
      sc = std::max(sc, std::abs(g[i]));
    }
    return sc > 0.0 ? d / sc : d;
  };
  rep.position_gap = gap(0);
  rep.momentum_gap = gap(2);
  return rep;
}

}  // namespace vsphere
