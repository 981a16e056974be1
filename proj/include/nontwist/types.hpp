#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nontwist {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Raised when an operation is evaluated outside its mathematical domain
/// (b = 0, negative discriminant, a <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a numerical procedure cannot deliver a certified result
/// (energy drift over budget, no root in range, failed cross-check).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduce an angle to [0, 2pi).
inline double normalize_angle(double x) {
  double r = x - kTwoPi * std::floor(x / kTwoPi);
  // floor-based reduction can land exactly on 2pi for tiny negative x
  if (r >= kTwoPi) r = 0.0;
  if (r < 0.0) r = 0.0;
  return r;
}

/// Shape parameters (a, b) and perturbation amplitude k of the cubic map.
class Params {
 public:
  Params(double a, double b, double k) : a_(a), b_(b), k_(k) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(k))
      throw DomainError("parameters must be finite");
    if (!(a > 0.0)) throw DomainError("a must be > 0");
    if (!(k >= 0.0)) throw DomainError("k must be >= 0");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double k() const { return k_; }

  /// The unperturbed map violates the twist condition somewhere iff a^2 - 3b >= 0.
  bool nontwist() const { return a_ * a_ - 3.0 * b_ >= 0.0; }

  Params with_b(double b) const { return {a_, b, k_}; }
  Params with_k(double k) const { return {a_, b_, k}; }

  friend bool operator==(const Params&, const Params&) = default;

 private:
  double a_;
  double b_;
  double k_;
};

/// Point on the annulus; x is kept in [0, 2pi).
struct PhasePoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
};

/// Point on the universal cover; X is never wrapped.
struct LiftPoint {
  double X = 0.0;
  double Y = 0.0;

  PhasePoint project() const { return {normalize_angle(X), Y}; }

  friend bool operator==(const LiftPoint&, const LiftPoint&) = default;
};

/// Shortest signed angular difference a - b mapped into (-pi, pi].
inline double angle_difference(double a, double b) {
  double d = std::remainder(a - b, kTwoPi);
  return d == -kPi ? kPi : d;
}

/// Euclidean distance on the cylinder (x periodic).
inline double cylinder_distance(const PhasePoint& p, const PhasePoint& q) {
  return std::hypot(angle_difference(p.x, q.x), p.y - q.y);
}

}  // namespace nontwist
