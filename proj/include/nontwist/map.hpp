#pragma once

#include <array>
#include <utility>

#include "nontwist/trace.hpp"
#include "nontwist/types.hpp"

// The cubic nontwist map
//   y' = y + k sin x
//   x' = x + F(a, b; y')   (mod 2pi),   F(a, b; y) = y - a y^2 + b y^3
// together with its lift, orbits and rotation-number diagnostics.

namespace nontwist {

/// F(a, b; y), the angle advance per iterate of the unperturbed map.
double rotation_profile(const Params& p, double y);

/// F'(y) = 1 - 2 a y + 3 b y^2. Its sign is the local twist sign.
double twist_derivative(const Params& p, double y);

/// One iterate on the annulus. y' is computed first and feeds the angle update.
PhasePoint step(const Params& p, const PhasePoint& pt);

/// One iterate of the lift; X is not wrapped.
LiftPoint lift_step(const Params& p, const LiftPoint& pt);

/// n iterates starting at pt; the trace holds n + 1 points.
Trace orbit(const Params& p, const PhasePoint& pt, long n);

/// Finite-n estimate (X_n - X_0) / (2 n pi) of the rotation number.
/// The angle increments are accumulated with compensated summation.
double rotation_number_numeric(const Params& p, const PhasePoint& pt, long n);

struct TwistlessCircles {
  double y_c1 = 0.0;
  double y_c2 = 0.0;
  double rho_c1 = 0.0;
  double rho_c2 = 0.0;
};

/// Circles where F' vanishes: y = (a +- sqrt(a^2 - 3b)) / (3b).
/// Throws DomainError when b == 0 or a^2 - 3b < 0. At a^2 = 3b the two
/// circles coincide at y = a / (3b).
TwistlessCircles twistless_circles(const Params& p);

/// Closed-form rotation numbers on C1 and C2 (the expressions with the
/// 54 pi b^2 denominator). They equal F(y_Ci) / (2 pi).
std::pair<double, double> extremal_rotation_numbers(const Params& p);

/// Jacobian of one lift step, row-major {dX'/dX, dX'/dY, dY'/dX, dY'/dY}.
std::array<double, 4> step_jacobian(const Params& p, const PhasePoint& pt);

}  // namespace nontwist
