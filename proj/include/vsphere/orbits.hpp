#pragma once

// Special orbits with the vortex at the north pole: vortex parallels, vortex
// meridians and the collision-transmission continuation of meridian
// collision orbits.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vsphere/dynamics.hpp"
#include "vsphere/energy.hpp"
#include "vsphere/integrator.hpp"

namespace vsphere {

/// Chord^2 below which a sphere-chart orbit is considered to reach the vortex.
inline constexpr double kCollisionChord2 = 1e-8;
/// Kinetic energy below which a minimum of p_theta^2 / 2R^2 counts as a turning point.
inline constexpr double kTouchKinetic = 1e-8;

// ---------------------------------------------------------------------------
// Vortex parallels

struct PeriodicParallel {
  double theta_bar = 0.0;
  double p_phi = 0.0;
  double period = 0.0;
  /// |p_theta'| of the field at the orbit.
  double residual = 0.0;
  /// Value that the alternate force normalisation k sin(theta)/(2R^2 (1 + cos(theta))) would give.
  double p_phi_printed = 0.0;
  /// max-norm distance to the initial state after one integrated period.
  double closing_error = 0.0;
};

/**
 * Circular orbit theta = theta_bar: p_phi is the positive root of p_theta' = 0
 * on the north-pole field. Exists only on the vortex half-sphere theta_bar > pi/2.
 */
inline PeriodicParallel vortex_parallel(double theta_bar, const Params& params, bool check_closing = true) {
  if (!(theta_bar > 0.0 && theta_bar < kPi)) throw Error(ErrorKind::DomainError, "theta_bar must lie in (0, pi)");
  if (theta_bar <= 0.5 * kPi) throw Error(ErrorKind::NoOrbit, "no vortex parallel outside the vortex half-sphere");
  const double R2 = params.radius * params.radius;
  auto g = [&](double p) { return vf_sphere_vortex({0.0, theta_bar, p, 0.0}, params, VortexAt::NorthPole)[3]; };

  double lo = 0.0, hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  PeriodicParallel out;
  out.theta_bar = theta_bar;
  out.p_phi = std::abs(g(lo)) < std::abs(g(hi)) ? lo : hi;
  out.residual = std::abs(g(out.p_phi));
  const double st = std::sin(theta_bar), ct = std::cos(theta_bar);
  out.period = kTwoPi * R2 * st * st / out.p_phi;
  out.p_phi_printed = std::sqrt(-params.k() * st * st * st * st / (2.0 * ct * (1.0 + ct)));

  if (check_closing) {
    IntegratorOptions opts;
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-14;
    const Vec<4> s0 = {0.0, theta_bar, out.p_phi, 0.0};
    const auto tr = integrate<4>(sphere_vortex_field(params, VortexAt::NorthPole), s0, 0.0, out.period, opts);
    const Vec<4>& s1 = tr.states.back();
    out.closing_error = std::max({std::abs(angle_diff(s1[0], s0[0])), std::abs(s1[1] - s0[1]),
                                  std::abs(s1[2] - s0[2]), std::abs(s1[3] - s0[3])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Meridian orbits

struct MeridianOrbit {
  double phi0 = 0.0;
  double h = 0.0;
  /// Reduced (theta, p_theta) orbit, theta in (-pi, pi).
  Trajectory<2> reduced;
  /// The same orbit in the sphere chart (phi, theta, p_phi = 0, p_theta).
  Trajectory<4> sphere;
};

/// Sphere-chart state of a reduced meridian state on the meridian phi0.
inline Vec<4> meridian_to_sphere(const Vec<2>& s, double phi0) {
  if (s[0] >= 0.0) return {wrap_angle(phi0), s[0], 0.0, s[1]};
  return {wrap_angle(phi0 + kPi), -s[0], 0.0, -s[1]};
}

struct MeridianOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double max_step = 1.0;
  double record_every = 0.0;
  /// Map each accepted state back onto the energy level.
  bool project_energy = true;
  /// Energy level used for the projection; defaults to H of the initial state.
  std::optional<double> energy;
};

/**
 * Orbit of the north-pole field with p_phi = 0, integrated in the reduced
 * meridian system, which stays regular through the antipodal point theta = 0.
 * Events: AntipodalPassage (theta crosses 0), ZeroVelocityTouch (turning
 * point), CollisionApproach (chord^2 < 1e-8, terminal).
 */
inline MeridianOrbit meridian_orbit(double phi0, double theta0, double p_theta0, const Params& params, double t_end,
                                    const MeridianOptions& mopts = {}) {
  if (!(theta0 >= 0.0 && theta0 < kPi)) throw Error(ErrorKind::DomainError, "theta0 must lie in [0, pi)");
  const double R2 = params.radius * params.radius;
  const double k = params.k();
  MeridianOrbit out;
  out.phi0 = wrap_angle(phi0);
  const Vec<2> s0 = {theta0, p_theta0};
  out.h = mopts.energy ? *mopts.energy : hamiltonian_meridian(s0, params);
  const double h = out.h;

  std::vector<EventSpec<2>> events;
  events.push_back({EventKind::AntipodalPassage, [](double, const Vec<2>& s) { return s[0]; }, 0, false, {}});
  events.push_back({EventKind::ZeroVelocityTouch,
                    [R2, k](double, const Vec<2>& s) { return s[1] * k * std::tan(0.5 * s[0]) / R2; }, +1, false,
                    [R2](const Vec<2>& s) { return s[1] * s[1] / (2.0 * R2) < kTouchKinetic; }});
  events.push_back({EventKind::CollisionApproach,
                    [R2](double, const Vec<2>& s) {
                      const double c = std::cos(0.5 * s[0]);
                      return 4.0 * R2 * c * c - kCollisionChord2;
                    },
                    -1, true, {}});

  std::function<void(Vec<2>&)> project;
  if (mopts.project_energy) {
    project = [&params, h, R2](Vec<2>& s) {
      if (s[1] == 0.0) return;
      const double kin = meridian_kinetic(h, s[0], params);
      if (kin <= 0.0) return;
      s[1] = std::copysign(std::sqrt(2.0 * R2 * kin), s[1]);
    };
  }
  IntegratorOptions opts;
  opts.rel_tol = mopts.rel_tol;
  opts.abs_tol = mopts.abs_tol;
  opts.max_step = mopts.max_step;
  opts.record_every = mopts.record_every;
  out.reduced = integrate<2>(meridian_field(params), s0, 0.0, t_end, opts, events, project);

  Trajectory<4>& sph = out.sphere;
  sph.field = FieldKind::SphereVortexNorth;
  sph.chart = Chart::SphereAngles;
  sph.time_scale = TimeScale::PhysicalT;
  sph.completed = out.reduced.completed;
  sph.hamiltonian = [params](const Vec<4>& s) { return hamiltonian_sphere_vortex(s, params, VortexAt::NorthPole); };
  sph.times = out.reduced.times;
  for (const auto& s : out.reduced.states) sph.states.push_back(meridian_to_sphere(s, out.phi0));
  for (const auto& e : out.reduced.events) sph.events.push_back({e.kind, e.time, meridian_to_sphere(e.state, out.phi0), e.message});
  return out;
}

// ---------------------------------------------------------------------------
// Regime narrative

enum class RegimeBehavior { BounceBetweenZvmAndVortex, AsymptoticToAntipodal, MeridianThroughAntipodal };

inline std::string to_string(RegimeBehavior b) {
  switch (b) {
    case RegimeBehavior::BounceBetweenZvmAndVortex: return "BounceBetweenZvmAndVortex";
    case RegimeBehavior::AsymptoticToAntipodal: return "AsymptoticToAntipodal";
    case RegimeBehavior::MeridianThroughAntipodal: return "MeridianThroughAntipodal";
  }
  return "Unknown";
}

struct RegimeNarrative {
  double h = 0.0;
  RegimeBehavior behavior = RegimeBehavior::BounceBetweenZvmAndVortex;
};

inline RegimeNarrative classify_transmission(double h, const Params& params) {
  const double h2 = thresholds(params).h2;
  if (std::abs(h - h2) <= kThresholdTol) return {h, RegimeBehavior::AsymptoticToAntipodal};
  return {h, h < h2 ? RegimeBehavior::BounceBetweenZvmAndVortex : RegimeBehavior::MeridianThroughAntipodal};
}

/**
 * Meridian orbit on the level h that starts at theta0 = 3pi/4 (moved towards
 * the vortex if that point is not allowed) heading for the antipodal point.
 */
inline MeridianOrbit demonstration_orbit(double h, const Params& params, double span = 1e3, double phi0 = 0.0) {
  double theta0 = 0.75 * kPi;
  for (int i = 0; i < 60 && meridian_kinetic(h, theta0, params) <= 0.0; ++i) theta0 = 0.5 * (theta0 + kPi);
  const double kin = meridian_kinetic(h, theta0, params);
  if (kin <= 0.0) throw Error(ErrorKind::ForbiddenRegion, "no allowed starting point on the meridian");
  const double p0 = -std::sqrt(2.0 * params.radius * params.radius * kin);
  MeridianOptions mopts;
  mopts.energy = h;
  return meridian_orbit(phi0, theta0, p0, params, span, mopts);
}

// ---------------------------------------------------------------------------
// Collision necessity

struct CollisionCheckReport {
  double l = 0.0;
  bool reaches_singular_set = false;
  /// min over samples of 2R^2 h sin^2 - (Gamma/4pi) R^2 sin^2 log(2R^2(1 + cos)) - l^2
  double min_allowed_residual = 0.0;
  bool passed = true;
  std::string message;
};

/// A sphere orbit can reach the vortex or the antipodal point only with l = 0.
inline CollisionCheckReport collision_necessity_check(const Trajectory<4>& traj, const Params& params,
                                                      double l_threshold = 1e-6) {
  CollisionCheckReport rep;
  if (traj.states.empty()) return rep;
  const double R2 = params.radius * params.radius;
  const double h = hamiltonian_sphere_vortex(traj.states.front(), params, VortexAt::NorthPole);
  rep.l = traj.states.front()[2];
  rep.reaches_singular_set = traj.has_event(EventKind::CollisionApproach) || traj.has_event(EventKind::AntipodalPassage);
  rep.min_allowed_residual = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.states) {
    const double st2 = std::sin(s[1]) * std::sin(s[1]);
    const double res = 2.0 * R2 * h * st2 -
                       params.gamma / (4.0 * kPi) * R2 * st2 * std::log(2.0 * R2 * (1.0 + std::cos(s[1]))) -
                       s[2] * s[2];
    rep.min_allowed_residual = std::min(rep.min_allowed_residual, res);
  }
  if (rep.reaches_singular_set && std::abs(rep.l) >= 1e-8) {
    rep.passed = false;
    rep.message = "orbit reaches the vortex or the antipodal point with l != 0";
  } else if (std::abs(rep.l) > l_threshold && rep.min_allowed_residual < -1e-9) {
    rep.passed = false;
    rep.message = "orbit leaves the theta-range allowed by its energy and angular momentum";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Collision transmission

struct TransmittedPath {
  Trajectory<4> pre;
  /// Reflected continuation on (T_s, 2 T_s - t_0].
  Trajectory<4> post;
  double event_time = 0.0;  ///< time of the CollisionApproach event
  double T_s = 0.0;         ///< time at which the orbit reaches the vortex
  double phi_v = 0.0, theta_v = kPi;
  /// Largest chord distance to the vortex of the two segment ends at the junction.
  double junction_gap = 0.0;
};

/// Reflection through the vortex along the meridian great circle: the point at
/// unwrapped colatitude 2pi - theta on meridian phi is (phi + pi, theta).
inline Vec<4> reflect_through_vortex(const Vec<4>& s) { return {wrap_angle(s[0] + kPi), s[1], 0.0, -s[3]}; }

/// Remaining time from colatitude theta_e to the vortex at energy h, by quadrature of R^2 / |p_theta|.
inline double time_to_vortex(double theta_e, double h, const Params& params) {
  const double R2 = params.radius * params.radius;
  const double L = kPi - theta_e;
  if (L <= 0.0) return 0.0;
  // theta = pi - L u^2 removes the square-root behaviour at theta_e when p is small there.
  auto integrand = [&](double u) {
    const double th = kPi - L * u * u;
    const double kin = meridian_kinetic(h, th, params);
    if (kin <= 0.0) return 0.0;
    return R2 / std::sqrt(2.0 * R2 * kin) * 2.0 * L * u;
  };
  const int n = 400;
  double sum = integrand(0.0) + integrand(1.0);
  for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(static_cast<double>(i) / n);
  return sum / (3.0 * n);
}

/**
 * Continue a meridian collision orbit through the vortex: the state at time
 * T_s + s is the reflection of the state at T_s - s.
 */
inline TransmittedPath transmit(const Trajectory<4>& pre, const Params& params) {
  if (pre.events.empty() || pre.events.back().kind != EventKind::CollisionApproach) {
    throw Error(ErrorKind::NotColliding, "trajectory does not end in a collision approach");
  }
  for (const auto& s : pre.states) {
    if (std::abs(s[2]) > 1e-8) throw Error(ErrorKind::NonzeroAngularMomentum, "transmission needs l = 0");
  }
  TransmittedPath path;
  path.pre = pre;
  const Vec<4>& end = pre.states.back();
  path.event_time = pre.times.back();
  path.phi_v = end[0];
  const double h = hamiltonian_sphere_vortex(pre.states.front(), params, VortexAt::NorthPole);
  path.T_s = path.event_time + time_to_vortex(end[1], h, params);

  Trajectory<4>& post = path.post;
  post.field = pre.field;
  post.chart = pre.chart;
  post.time_scale = pre.time_scale;
  post.hamiltonian = pre.hamiltonian;
  for (std::size_t i = pre.size(); i-- > 0;) {
    post.times.push_back(2.0 * path.T_s - pre.times[i]);
    post.states.push_back(reflect_through_vortex(pre.states[i]));
  }
  const double R = params.radius;
  auto chord = [&](const Vec<4>& s) { return 2.0 * R * std::cos(0.5 * s[1]); };
  path.junction_gap = std::max(chord(end), chord(post.states.front()));
  return path;
}

/**
 * Finite-difference residual of the north-pole equations of motion along the
 * reflected segment, at n times spread uniformly over the middle 90% of it.
 * The state at post time T_s + s is the reflection of the pre-collision state
 * at T_s - s, obtained by a single Runge-Kutta step from the nearest stored
 * sample; the reflected path is central-differenced with step dt.
 */
inline double transmission_residual(const TransmittedPath& path, const Params& params, int n = 100,
                                    double dt = 1e-4) {
  const auto F = [&](const Vec<4>& s) { return vf_sphere_vortex(s, params, VortexAt::NorthPole); };
  const auto& pre = path.pre;
  if (pre.size() < 2 || n < 2) throw Error(ErrorKind::InvalidInput, "reflected segment too short");
  const double t0 = pre.times.front();
  auto pre_state = [&](double s) {
    auto it = std::upper_bound(pre.times.begin(), pre.times.end(), s);
    const std::size_t k = it == pre.times.begin() ? 0 : static_cast<std::size_t>(it - pre.times.begin()) - 1;
    const Vec<4>& y = pre.states[k];
    if (s == pre.times[k]) return y;
    return detail::dopri_step(F, y, F(y), s - pre.times[k]).y;
  };
  const double span = path.T_s - t0;
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double s = t0 + span * (0.05 + 0.9 * j / (n - 1.0));  // pre time; post time is 2 T_s - s
    const Vec<4> ya = pre_state(s - dt), yb = pre_state(s + dt);
    const Vec<4> a = reflect_through_vortex(ya), b = reflect_through_vortex(yb);
    const Vec<4> fp = F(reflect_through_vortex(pre_state(s)));
    for (int c = 0; c < 4; ++c) {
      const double diff = c == 0 ? angle_diff(a[c], b[c]) : a[c] - b[c];
      worst = std::max(worst, std::abs(diff / (2.0 * dt) - fp[c]));
    }
  }
  return worst;
}

}  // namespace vsphere
