#pragma once

// Adaptive Dormand-Prince 5(4) and fixed-step RK4 integration with event
// location, optional post-step projection and monitor series.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "vsphere/dynamics.hpp"

namespace vsphere {

enum class Scheme { AdaptiveEmbedded45, FixedStepRK4 };

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  ///< 0 picks a step from the field scale
  /// Step of the fixed scheme.
  double fixed_step = 1e-2;
  Scheme scheme = Scheme::AdaptiveEmbedded45;
  /// Sampling interval; 0 records every accepted step.
  double record_every = 0.0;
  long max_steps = 50'000'000;
  /// Raise EnergyDriftAlarm once the Hamiltonian drifts by more than this (0 = off).
  double energy_drift_tol = 0.0;
};

enum class EventKind { CollisionApproach, ZeroVelocityTouch, AntipodalPassage, EnergyDriftAlarm, StepFailure };

inline std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::CollisionApproach: return "CollisionApproach";
    case EventKind::ZeroVelocityTouch: return "ZeroVelocityTouch";
    case EventKind::AntipodalPassage: return "AntipodalPassage";
    case EventKind::EnergyDriftAlarm: return "EnergyDriftAlarm";
    case EventKind::StepFailure: return "StepFailure";
  }
  return "Unknown";
}

/// Zero crossing of g(t, state) in the given direction (+1 rising, -1 falling, 0 both).
template <std::size_t N>
struct EventSpec {
  EventKind kind = EventKind::CollisionApproach;
  std::function<double(double, const Vec<N>&)> g;
  int direction = 0;
  bool terminal = false;
  /// Crossings where the guard is false are ignored.
  std::function<bool(const Vec<N>&)> guard;
};

template <std::size_t N>
struct Event {
  EventKind kind = EventKind::StepFailure;
  double time = 0.0;
  Vec<N> state{};
  std::string message;
};

template <std::size_t N>
struct Trajectory {
  FieldKind field = FieldKind::Plane;
  Chart chart = Chart::Plane;
  TimeScale time_scale = TimeScale::PhysicalT;
  std::vector<double> times;
  std::vector<Vec<N>> states;
  std::vector<Event<N>> events;
  std::map<std::string, std::vector<double>> monitors;
  std::function<double(const Vec<N>&)> hamiltonian;
  /// False when integration stopped early on a StepFailure.
  bool completed = true;

  std::size_t size() const { return times.size(); }
  bool has_event(EventKind k) const {
    return std::any_of(events.begin(), events.end(), [k](const Event<N>& e) { return e.kind == k; });
  }
  std::vector<EventKind> event_kinds() const {
    std::vector<EventKind> out;
    for (const auto& e : events) out.push_back(e.kind);
    return out;
  }
};

namespace detail {

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double h, const Vec<N>& k) {
  Vec<N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

template <std::size_t N>
bool all_finite(const Vec<N>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// One Dormand-Prince step. Returns the 5th-order solution, the embedded error
/// vector and the derivative at the new point (FSAL).
template <std::size_t N>
struct DopriStep {
  Vec<N> y;
  Vec<N> err;
  Vec<N> f_end;
};

template <std::size_t N, class F>
DopriStep<N> dopri_step(const F& f, const Vec<N>& y0, const Vec<N>& k1, double h) {
  constexpr double a21 = 1.0 / 5.0;
  constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                   a54 = -212.0 / 729.0;
  constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                   a65 = -5103.0 / 18656.0;
  constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                   b6 = 11.0 / 84.0;
  constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                   e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
  Vec<N> t;
  for (std::size_t i = 0; i < N; ++i) t[i] = y0[i] + h * a21 * k1[i];
  const Vec<N> k2 = f(t);
  for (std::size_t i = 0; i < N; ++i) t[i] = y0[i] + h * (a31 * k1[i] + a32 * k2[i]);
  const Vec<N> k3 = f(t);
  for (std::size_t i = 0; i < N; ++i) t[i] = y0[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  const Vec<N> k4 = f(t);
  for (std::size_t i = 0; i < N; ++i) t[i] = y0[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  const Vec<N> k5 = f(t);
  for (std::size_t i = 0; i < N; ++i)
    t[i] = y0[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  const Vec<N> k6 = f(t);
  DopriStep<N> out;
  for (std::size_t i = 0; i < N; ++i)
    out.y[i] = y0[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
  out.f_end = f(out.y);
  for (std::size_t i = 0; i < N; ++i)
    out.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * out.f_end[i]);
  return out;
}

template <std::size_t N, class F>
Vec<N> rk4_step(const F& f, const Vec<N>& y0, const Vec<N>& k1, double h) {
  const Vec<N> k2 = f(axpy(y0, 0.5 * h, k1));
  const Vec<N> k3 = f(axpy(y0, 0.5 * h, k2));
  const Vec<N> k4 = f(axpy(y0, h, k3));
  Vec<N> y;
  for (std::size_t i = 0; i < N; ++i) y[i] = y0[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return y;
}

}  // namespace detail

/**
 * Integrate `field` from s0 over [t0, t1] (t1 < t0 integrates backward).
 * Event crossings are detected from the sign of g at the ends of each
 * accepted step and refined to 1e-10 in time by bisection, evaluating the
 * state with a single Runge-Kutta step from the step start. `project`, if
 * given, maps each accepted state back to a constraint set. Monitors are
 * evaluated at every recorded sample.
 */
template <std::size_t N>
Trajectory<N> integrate(const VectorField<N>& field, const Vec<N>& s0, double t0, double t1,
                        const IntegratorOptions& opts, const std::vector<EventSpec<N>>& events = {},
                        const std::function<void(Vec<N>&)>& project = {},
                        const std::map<std::string, std::function<double(const Vec<N>&)>>& monitors = {}) {
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0)) throw Error(ErrorKind::InvalidInput, "tolerances must be > 0");
  if (!std::isfinite(t0) || !std::isfinite(t1)) throw Error(ErrorKind::InvalidInput, "time span must be finite");

  Trajectory<N> traj;
  traj.field = field.kind;
  traj.chart = field.chart;
  traj.time_scale = field.time_scale;
  traj.hamiltonian = field.hamiltonian;

  auto record = [&](double t, const Vec<N>& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    for (const auto& [name, fn] : monitors) traj.monitors[name].push_back(fn(y));
  };
  auto fail = [&](double t, const Vec<N>& y, const std::string& msg) {
    traj.events.push_back({EventKind::StepFailure, t, y, msg});
    traj.completed = false;
  };

  Vec<N> y = s0;
  record(t0, y);
  if (t1 == t0) return traj;

  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  const auto& f = field.eval;
  const double H0 = field.hamiltonian && opts.energy_drift_tol > 0.0 ? field.hamiltonian(s0) : 0.0;
  bool alarm_raised = false;

  Vec<N> fy;
  try {
    fy = f(y);
  } catch (const Error& e) {
    fail(t0, y, e.what());
    return traj;
  }

  auto err_norm = [&](const Vec<N>& y0, const Vec<N>& y1, const Vec<N>& e) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      m = std::max(m, std::abs(e[i]) / sc);
    }
    return m;
  };

  double h;
  if (opts.scheme == Scheme::FixedStepRK4) {
    h = std::min(opts.fixed_step, span);
  } else if (opts.initial_step > 0.0) {
    h = opts.initial_step;
  } else {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opts.abs_tol + opts.rel_tol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(fy[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.01 * span);
  }
  h = std::min({h, opts.max_step, span});

  std::vector<double> g_prev(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) g_prev[i] = events[i].g(t0, y);

  double t = t0;
  double next_record = opts.record_every > 0.0 ? t0 + dir * opts.record_every : t1;
  long steps = 0;
  std::string last_error;

  while (dir * (t1 - t) > 0.0) {
    if (++steps > opts.max_steps) {
      fail(t, y, "maximum number of steps exceeded");
      return traj;
    }
    const double remaining = std::abs(t1 - t);
    const double to_record = std::abs(next_record - t);
    bool clamped = false;
    double hs = std::min({h, remaining, opts.max_step});
    if (to_record <= hs * (1.0 + 1e-12)) {
      hs = to_record;
      clamped = true;
    }
    if (hs < 1e-14 * std::max(1.0, std::abs(t))) {
      fail(t, y, last_error.empty() ? "step size underflow" : "step size underflow after " + last_error);
      return traj;
    }

    Vec<N> y_new, f_new;
    double err = 0.0;
    try {
      if (opts.scheme == Scheme::FixedStepRK4) {
        y_new = detail::rk4_step(f, y, fy, dir * hs);
        f_new = f(y_new);
      } else {
        const auto st = detail::dopri_step(f, y, fy, dir * hs);
        y_new = st.y;
        f_new = st.f_end;
        err = err_norm(y, y_new, st.err);
      }
      if (!detail::all_finite(y_new) || !detail::all_finite(f_new)) throw Error(ErrorKind::NumericalFailure, "non-finite state");
    } catch (const Error& e) {
      if (opts.scheme == Scheme::FixedStepRK4) {
        fail(t, y, e.what());
        return traj;
      }
      last_error = e.what();
      h = 0.25 * hs;
      continue;
    }

    if (opts.scheme == Scheme::AdaptiveEmbedded45 && err > 1.0) {
      h = hs * std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    const double t_new = clamped ? next_record : t + dir * hs;
    if (project) {
      project(y_new);
      try {
        f_new = f(y_new);
      } catch (const Error& e) {
        fail(t_new, y_new, e.what());
        return traj;
      }
    }

    // Event detection on the accepted step.
    auto state_at = [&](double tc) {
      if (tc == t) return y;
      if (opts.scheme == Scheme::FixedStepRK4) return detail::rk4_step(f, y, fy, tc - t);
      return detail::dopri_step(f, y, fy, tc - t).y;
    };
    const double t_tol = std::max(1e-10, 8.0 * std::numeric_limits<double>::epsilon() * std::abs(t_new));
    std::vector<Event<N>> found;
    bool terminal_hit = false;
    double stop_time = t_new;
    Vec<N> stop_state = y_new;
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto& ev = events[i];
      const double g0 = g_prev[i];
      const double g1 = ev.g(t_new, y_new);
      const bool rising = g0 < 0.0 && g1 >= 0.0;
      const bool falling = g0 > 0.0 && g1 <= 0.0;
      if (!((ev.direction >= 0 && rising) || (ev.direction <= 0 && falling))) continue;
      double lo = t, hi = t_new, glo = g0;
      Vec<N> ys = y_new;
      while (std::abs(hi - lo) > t_tol) {
        const double mid = 0.5 * (lo + hi);
        Vec<N> ym;
        double gm;
        try {
          ym = state_at(mid);
          gm = ev.g(mid, ym);
        } catch (const Error&) {
          hi = mid;
          continue;
        }
        if ((glo < 0.0) == (gm < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
          ys = ym;
        }
      }
      if (ev.guard && !ev.guard(ys)) continue;
      found.push_back({ev.kind, hi, ys, {}});
      if (ev.terminal && (!terminal_hit || dir * (hi - stop_time) < 0.0)) {
        terminal_hit = true;
        stop_time = hi;
        stop_state = ys;
      }
    }
    std::sort(found.begin(), found.end(),
              [dir](const Event<N>& a, const Event<N>& b) { return dir * (a.time - b.time) < 0.0; });
    for (const auto& e : found) {
      // Events past a terminal one are dropped.
      if (terminal_hit && dir * (e.time - stop_time) > 0.0) continue;
      traj.events.push_back(e);
    }
    if (terminal_hit) {
      record(stop_time, stop_state);
      return traj;
    }
    for (std::size_t i = 0; i < events.size(); ++i) g_prev[i] = events[i].g(t_new, y_new);

    if (opts.energy_drift_tol > 0.0 && field.hamiltonian && !alarm_raised) {
      if (std::abs(field.hamiltonian(y_new) - H0) > opts.energy_drift_tol) {
        traj.events.push_back({EventKind::EnergyDriftAlarm, t_new, y_new, {}});
        alarm_raised = true;
      }
    }

    t = t_new;
    y = y_new;
    fy = f_new;
    if (opts.record_every <= 0.0 || clamped) record(t, y);
    if (clamped) next_record = opts.record_every > 0.0 ? next_record + dir * opts.record_every : t1;
    if (dir * (next_record - t1) > 0.0) next_record = t1;

    if (opts.scheme == Scheme::AdaptiveEmbedded45) {
      const double fac = err == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
      // A clamped step says nothing about the natural step length.
      h = clamped ? std::max(h, hs * fac) : hs * fac;
    }
  }
  return traj;
}

/// Per-sample |H(state) - H(state_0)|.
template <std::size_t N>
std::vector<double> monitor_energy(const Trajectory<N>& traj) {
  if (!traj.hamiltonian) throw Error(ErrorKind::InvalidInput, "trajectory chart has no Hamiltonian");
  std::vector<double> out;
  if (traj.states.empty()) return out;
  const double H0 = traj.hamiltonian(traj.states.front());
  for (const auto& s : traj.states) out.push_back(std::abs(traj.hamiltonian(s) - H0));
  return out;
}

struct AngularMomentumReport {
  std::vector<double> p_phi_drift;  ///< |p_phi - p_phi(0)|
  std::vector<double> l_mismatch;   ///< |R^2 sin^2(theta) phi' - p_phi|
};

/// Angular-momentum monitor for sphere trajectories with the vortex at the north pole.
inline AngularMomentumReport monitor_angular_momentum(const Trajectory<4>& traj, const Params& params) {
  if (traj.field != FieldKind::SphereVortexNorth && traj.field != FieldKind::SphereGeodesic) {
    throw Error(ErrorKind::InvalidInput, "angular momentum is conserved only with the vortex at the north pole");
  }
  AngularMomentumReport rep;
  if (traj.states.empty()) return rep;
  const double R2 = params.radius * params.radius;
  const double p0 = traj.states.front()[2];
  for (const auto& s : traj.states) {
    const double st = std::sin(s[1]);
    const double phi_dot = vf_sphere_vortex(s, params, VortexAt::NorthPole)[0];
    rep.p_phi_drift.push_back(std::abs(s[2] - p0));
    rep.l_mismatch.push_back(std::abs(R2 * st * st * phi_dot - s[2]));
  }
  return rep;
}

}  // namespace vsphere
