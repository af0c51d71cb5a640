#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vsphere {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <std::size_t N>
using Vec = std::array<double, N>;

enum class ErrorKind {
  InvalidInput,
  DomainError,
  NorthPole,
  OffSphere,
  OriginSingular,
  AtVortex,
  PoleSingular,
  CollisionState,
  OffShell,
  ZeroVelocity,
  ForbiddenRegion,
  DegenerateStart,
  NoOrbit,
  NotColliding,
  NonzeroAngularMomentum,
  NumericalFailure,
};

inline constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NorthPole: return "NorthPole";
    case ErrorKind::OffSphere: return "OffSphere";
    case ErrorKind::OriginSingular: return "OriginSingular";
    case ErrorKind::AtVortex: return "AtVortex";
    case ErrorKind::PoleSingular: return "PoleSingular";
    case ErrorKind::CollisionState: return "CollisionState";
    case ErrorKind::OffShell: return "OffShell";
    case ErrorKind::ZeroVelocity: return "ZeroVelocity";
    case ErrorKind::ForbiddenRegion: return "ForbiddenRegion";
    case ErrorKind::DegenerateStart: return "DegenerateStart";
    case ErrorKind::NoOrbit: return "NoOrbit";
    case ErrorKind::NotColliding: return "NotColliding";
    case ErrorKind::NonzeroAngularMomentum: return "NonzeroAngularMomentum";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/**
 * Physical context shared by every computation: sphere radius and vortex
 * circulation. Only the attracting case (gamma > 0) is supported.
 */
struct Params {
  double radius = 1.0;
  double gamma = 1.0;

  Params() = default;
  Params(double r, double g) : radius(r), gamma(g) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw Error(ErrorKind::DomainError, "radius must be positive and finite");
    }
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw Error(ErrorKind::DomainError, "gamma must be positive and finite");
    }
  }

  /// Coefficient Gamma/(8 pi) in front of log(chord^2).
  double k() const { return gamma / (8.0 * kPi); }
};

inline double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w -= kTwoPi;
  return w;
}

/// Smallest signed difference a - b on the circle, in (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  return d;
}

}  // namespace vsphere
