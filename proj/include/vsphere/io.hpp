#pragma once

// Comma-separated export of trajectories and events, 17 significant digits.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "vsphere/charts.hpp"
#include "vsphere/dynamics.hpp"
#include "vsphere/integrator.hpp"

namespace vsphere {

inline std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// State column names. Names that would clash with the monitor columns carry an "_s" suffix.
inline std::vector<std::string> state_names(Chart c, std::size_t n) {
  switch (c) {
    case Chart::SphereAngles:
      if (n == 2) return {"theta", "p_theta"};
      return {"phi", "theta", "p_phi_s", "p_theta"};
    case Chart::Plane: return {"x", "y", "px", "py"};
    case Chart::McGeheeTau: return {"r_s", "alpha", "zx", "zy"};
    case Chart::AngularSigma:
      if (n == 2) return {"alpha", "psi"};
      return {"r_s", "alpha", "psi"};
  }
  return {};
}

/// Monitor columns energy, p_phi, r, E_hat of one sample; NaN where not defined.
template <std::size_t N>
using ExtrasFn = std::function<std::array<double, 4>(const Vec<N>&)>;

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline ExtrasFn<4> sphere_extras(const Params& params, VortexAt at) {
  return [params, at](const Vec<4>& s) -> std::array<double, 4> {
    double E = kNaN;
    try {
      E = hamiltonian_sphere_vortex(s, params, at);
    } catch (const Error&) {
    }
    return {E, s[2], kNaN, kNaN};
  };
}

inline ExtrasFn<4> plane_extras(const Params& params) {
  return [params](const Vec<4>& s) -> std::array<double, 4> {
    const PlaneState ps = PlaneState::from_array(s);
    try {
      const McGeheeState m = plane_to_mcgehee(ps, params);
      const double a = coeffs_mcgehee(m.r, m.alpha, params).a;
      return {hamiltonian_plane(s, params), kNaN, m.r, a * m.zx * m.zx + m.zy * m.zy};
    } catch (const Error&) {
      return {kNaN, kNaN, kNaN, kNaN};
    }
  };
}

inline ExtrasFn<4> mcgehee_extras(const Params& params) {
  return [params](const Vec<4>& s) -> std::array<double, 4> {
    const double a = coeffs_mcgehee(s[0], s[1], params).a;
    const double E = s[0] > 0.0 ? hamiltonian_mcgehee(s, params) : kNaN;
    return {E, kNaN, s[0], a * s[2] * s[2] + s[3] * s[3]};
  };
}

inline ExtrasFn<3> sigma_extras(const Params& params, double h) {
  return [params, h](const Vec<3>& s) -> std::array<double, 4> {
    return {h, kNaN, s[0], e_hat(h, s[0], s[1], params)};
  };
}

template <std::size_t N>
void write_trajectory_csv(std::ostream& os, const Trajectory<N>& traj, const ExtrasFn<N>& extras) {
  os << "time";
  for (const auto& n : state_names(traj.chart, N)) os << ',' << n;
  os << ",energy,p_phi,r,E_hat\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << fmt(traj.times[i]);
    for (double v : traj.states[i]) os << ',' << fmt(v);
    const auto ex = extras ? extras(traj.states[i]) : std::array<double, 4>{kNaN, kNaN, kNaN, kNaN};
    for (double v : ex) os << ',' << fmt(v);
    os << '\n';
  }
}

template <std::size_t N>
void write_events_csv(std::ostream& os, const Trajectory<N>& traj) {
  os << "time,kind";
  for (const auto& n : state_names(traj.chart, N)) os << ',' << n;
  os << '\n';
  for (const auto& e : traj.events) {
    os << fmt(e.time) << ',' << to_string(e.kind);
    for (double v : e.state) os << ',' << fmt(v);
    os << '\n';
  }
}

}  // namespace vsphere
