#pragma once

// Energy-regime classification, the level circles C_delta of b and the zero
// velocity manifold E^ = 0 in McGehee coordinates.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vsphere/charts.hpp"
#include "vsphere/energy_shell.hpp"

namespace vsphere {

/// Absolute tolerance for h = h1 / h = h2 detection.
inline constexpr double kThresholdTol = 1e-9;

enum class LevelShape { Circle, Line, Point };

/// Level set {b = delta}: a circle, the line y = 0 (delta = 2R^2), or a point.
struct LevelCircle {
  LevelShape shape = LevelShape::Circle;
  double cx = 0.0, cy = 0.0;
  double radius = 0.0;
};

inline std::string to_string(LevelShape s) {
  switch (s) {
    case LevelShape::Circle: return "circle";
    case LevelShape::Line: return "line";
    case LevelShape::Point: return "point";
  }
  return "unknown";
}

inline LevelCircle level_circle(double delta, const Params& params) {
  const double R = params.radius, R2 = R * R;
  if (!(delta >= 0.0 && delta <= 4.0 * R2)) throw Error(ErrorKind::DomainError, "delta outside [0, 4R^2]");
  if (delta == 0.0) return {LevelShape::Point, 0.0, 2.0 * R, 0.0};
  if (delta == 4.0 * R2) return {LevelShape::Point, 0.0, -2.0 * R, 0.0};
  const double m = 2.0 * R2 - delta;
  if (std::abs(m) <= 1e-12 * R2) return {LevelShape::Line, 0.0, 0.0, 0.0};
  const double rad2 = 4.0 * delta * R2 - delta * delta;
  return {LevelShape::Circle, 0.0, 4.0 * R2 * R / m, 2.0 * R * std::sqrt(std::max(rad2, 0.0)) / std::abs(m)};
}

/// delta = exp(8 pi h / Gamma): E~_h = 0 exactly on {b = delta}.
inline double delta_of(double h, const Params& params) { return std::exp(h / params.k()); }

enum class RegimeKind { AllowedEverywhere, ForbiddenDisk, AllowedDisk, BoundaryH1, BoundaryH2 };

inline std::string to_string(RegimeKind k) {
  switch (k) {
    case RegimeKind::AllowedEverywhere: return "AllowedEverywhere";
    case RegimeKind::ForbiddenDisk: return "ForbiddenDisk";
    case RegimeKind::AllowedDisk: return "AllowedDisk";
    case RegimeKind::BoundaryH1: return "BoundaryH1";
    case RegimeKind::BoundaryH2: return "BoundaryH2";
  }
  return "Unknown";
}

struct EnergyRegime {
  double h = 0.0;
  RegimeKind kind = RegimeKind::AllowedEverywhere;
  double h1 = 0.0, h2 = 0.0;
  /// Boundary of the allowed region, when it has one.
  std::optional<LevelCircle> boundary;

  /// Whether E~_h(x, y) >= 0 according to the region descriptor alone.
  bool is_allowed(double x, double y) const {
    switch (kind) {
      case RegimeKind::AllowedEverywhere: return true;
      case RegimeKind::BoundaryH2: return !(x == 0.0 && y == boundary->cy);
      case RegimeKind::BoundaryH1: return y >= 0.0;
      case RegimeKind::ForbiddenDisk:
        return std::hypot(x - boundary->cx, y - boundary->cy) >= boundary->radius;
      case RegimeKind::AllowedDisk:
        return std::hypot(x - boundary->cx, y - boundary->cy) <= boundary->radius;
    }
    return false;
  }
};

inline EnergyRegime classify(double h, const Params& params) {
  const Thresholds th = thresholds(params);
  EnergyRegime reg;
  reg.h = h;
  reg.h1 = th.h1;
  reg.h2 = th.h2;
  const double R = params.radius;
  if (std::abs(h - th.h2) <= kThresholdTol) {
    reg.kind = RegimeKind::BoundaryH2;
    reg.boundary = LevelCircle{LevelShape::Point, 0.0, -2.0 * R, 0.0};
  } else if (h > th.h2) {
    reg.kind = RegimeKind::AllowedEverywhere;
  } else if (std::abs(h - th.h1) <= kThresholdTol) {
    reg.kind = RegimeKind::BoundaryH1;
    reg.boundary = LevelCircle{LevelShape::Line, 0.0, 0.0, 0.0};
  } else if (h > th.h1) {
    reg.kind = RegimeKind::ForbiddenDisk;
    reg.boundary = level_circle(delta_of(h, params), params);
  } else {
    reg.kind = RegimeKind::AllowedDisk;
    reg.boundary = level_circle(delta_of(h, params), params);
  }
  return reg;
}

// ---------------------------------------------------------------------------
// Zero velocity manifold

enum class ZvmTopology { Empty, PointLimit, ClosedCurve, GraphOverAlpha };

inline std::string to_string(ZvmTopology t) {
  switch (t) {
    case ZvmTopology::Empty: return "Empty";
    case ZvmTopology::PointLimit: return "PointLimit";
    case ZvmTopology::ClosedCurve: return "ClosedCurve";
    case ZvmTopology::GraphOverAlpha: return "GraphOverAlpha";
  }
  return "Unknown";
}

struct ZvmSample {
  double r = 0.0;
  double alpha = 0.0;
};

struct ZvmCurve {
  double h = 0.0;
  ZvmTopology topology = ZvmTopology::Empty;
  /// (r, alpha) samples; ordered along alpha for a graph, along the curve otherwise.
  std::vector<ZvmSample> samples;
  /// The same samples in plane coordinates.
  std::vector<PlanePoint> polyline;
};

namespace detail {

/// Bisection on E^(h, ., alpha) over [lo, hi] (opposite signs) to full precision.
inline double zvm_bisect(double h, double alpha, double lo, double hi, const Params& params) {
  double flo = e_hat(h, lo, alpha, params);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = e_hat(h, mid, alpha, params);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double flo_abs = std::abs(e_hat(h, lo, alpha, params));
  const double fhi_abs = std::abs(e_hat(h, hi, alpha, params));
  return flo_abs <= fhi_abs ? lo : hi;
}

/// Refine an approximate zero along the ray of fixed alpha.
inline double zvm_polish(double h, double r0, double alpha, const Params& params) {
  for (double w = 1e-9; w < 0.5; w *= 10.0) {
    const double lo = r0 * (1.0 - w), hi = r0 * (1.0 + w);
    if ((e_hat(h, lo, alpha, params) > 0.0) != (e_hat(h, hi, alpha, params) > 0.0)) {
      return zvm_bisect(h, alpha, lo, hi, params);
    }
  }
  return r0;
}

inline void push_sample(ZvmCurve& curve, double r, double alpha, const Params& params) {
  curve.samples.push_back({r, alpha});
  const double f = phi1(r);
  curve.polyline.push_back({f * std::cos(alpha), f * std::sin(alpha) + 2.0 * params.radius});
}

}  // namespace detail

/**
 * Zero set of E^(h, ., .). For h < h1 it is a graph alpha -> r(alpha), found by
 * bisection on each ray from the vortex; for h1 < h < h2 it is C_delta mapped
 * to (r, alpha); at h = h1 it is the line y = 0, a graph over alpha in (pi, 2pi).
 */
inline ZvmCurve zvm_curve(double h, const Params& params, int n_samples = 360) {
  if (n_samples < 1) throw Error(ErrorKind::InvalidInput, "n_samples must be >= 1");
  const Thresholds th = thresholds(params);
  const double R = params.radius;
  ZvmCurve curve;
  curve.h = h;
  if (std::abs(h - th.h2) <= kThresholdTol) {
    curve.topology = ZvmTopology::PointLimit;
    detail::push_sample(curve, phi1_inverse(4.0 * R), 1.5 * kPi, params);
    return curve;
  }
  if (h > th.h2) return curve;

  if (std::abs(h - th.h1) <= kThresholdTol) {
    curve.topology = ZvmTopology::GraphOverAlpha;
    for (int i = 0; i < n_samples; ++i) {
      const double alpha = kPi + kPi * (i + 0.5) / n_samples;
      const double r0 = phi1_inverse(-2.0 * R / std::sin(alpha));
      detail::push_sample(curve, detail::zvm_polish(h, r0, alpha, params), alpha, params);
    }
    return curve;
  }

  const LevelCircle C = level_circle(delta_of(h, params), params);
  if (h > th.h1) {
    curve.topology = ZvmTopology::ClosedCurve;
    for (int i = 0; i < n_samples; ++i) {
      const double t = kTwoPi * i / n_samples;
      const double x = C.cx + C.radius * std::cos(t);
      const double y = C.cy + C.radius * std::sin(t);
      const double dy = y - 2.0 * R;
      const double alpha = wrap_angle(std::atan2(dy, x));
      const double r0 = phi1_inverse(std::hypot(x, dy));
      detail::push_sample(curve, detail::zvm_polish(h, r0, alpha, params), alpha, params);
    }
    return curve;
  }

  curve.topology = ZvmTopology::GraphOverAlpha;
  const double wx = 0.0 - C.cx, wy = 2.0 * R - C.cy;
  for (int i = 0; i < n_samples; ++i) {
    const double alpha = kTwoPi * i / n_samples;
    const double ux = std::cos(alpha), uy = std::sin(alpha);
    const double uw = ux * wx + uy * wy;
    const double d_far = -uw + std::sqrt(uw * uw - (wx * wx + wy * wy) + C.radius * C.radius);
    const double r_hi = phi1_inverse(1.01 * d_far);
    detail::push_sample(curve, detail::zvm_bisect(h, alpha, 1e-3, r_hi, params), alpha, params);
  }
  return curve;
}

/// The unique zero-velocity restpoint (phi1^{-1}(4R), 3pi/2), present only at h = h2.
inline std::optional<ZvmSample> zvm_restpoint(double h, const Params& params) {
  if (std::abs(h - thresholds(params).h2) > kThresholdTol) return std::nullopt;
  return ZvmSample{phi1_inverse(4.0 * params.radius), 1.5 * kPi};
}

struct ZvmRestpointSearch {
  std::optional<ZvmSample> restpoint;
  ZvmTopology topology = ZvmTopology::Empty;
  /// min |grad(b)/b| over the sampled zero velocity manifold (infinite when empty).
  double min_grad_log_b = std::numeric_limits<double>::infinity();
};

/// Scan the zero velocity manifold for zeros of grad(b)/b.
inline ZvmRestpointSearch zvm_restpoint_search(double h, const Params& params, int n_samples = 720) {
  ZvmRestpointSearch out;
  const ZvmCurve curve = zvm_curve(h, params, n_samples);
  out.topology = curve.topology;
  for (const auto& p : curve.polyline) {
    const CoeffGrads g = coeff_grads_xy(p, params);
    out.min_grad_log_b = std::min(out.min_grad_log_b, std::hypot(g.logb_x, g.logb_y));
  }
  out.restpoint = zvm_restpoint(h, params);
  return out;
}

}  // namespace vsphere
