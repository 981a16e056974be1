#include "nontwist/map.hpp"

#include <cmath>

#include "nontwist/hamiltonian.hpp"

namespace nontwist {

double rotation_profile(const Params& p, double y) {
  return y * (1.0 + y * (-p.a() + y * p.b()));
}

double twist_derivative(const Params& p, double y) {
  return 1.0 + y * (-2.0 * p.a() + 3.0 * p.b() * y);
}

PhasePoint step(const Params& p, const PhasePoint& pt) {
  return lift_step(p, {pt.x, pt.y}).project();
}

LiftPoint lift_step(const Params& p, const LiftPoint& pt) {
  const double y = pt.Y + p.k() * std::sin(pt.X);
  return {pt.X + rotation_profile(p, y), y};
}

Trace orbit(const Params& p, const PhasePoint& pt, long n) {
  if (n < 0) throw DomainError("orbit length must be non-negative");
  Trace t;
  t.source = TraceSource::map_orbit;
  t.metadata.params = p;
  t.metadata.n_steps = n;
  t.points.reserve(static_cast<std::size_t>(n) + 1);
  t.energies.reserve(static_cast<std::size_t>(n) + 1);
  // Iterate the lift and project, so orbits agree exactly with lift iterates.
  LiftPoint cur{normalize_angle(pt.x), pt.y};
  for (long i = 0;; ++i) {
    const PhasePoint q = cur.project();
    t.points.push_back(q);
    t.energies.push_back(energy(p, q));
    if (i == n) break;
    cur = lift_step(p, cur);
  }
  return t;
}

double rotation_number_numeric(const Params& p, const PhasePoint& pt, long n) {
  if (n < 1) throw DomainError("rotation number needs n >= 1");
  // Neumaier summation of the per-step angle advances X_{i+1} - X_i.
  // The state follows lift_step exactly; only the displacement is summed
  // separately.
  double sum = 0.0;
  double comp = 0.0;
  LiftPoint cur{pt.x, pt.y};
  for (long i = 0; i < n; ++i) {
    const double y = cur.Y + p.k() * std::sin(cur.X);
    const double dx = rotation_profile(p, y);
    const double t = sum + dx;
    if (std::abs(sum) >= std::abs(dx)) comp += (sum - t) + dx;
    else comp += (dx - t) + sum;
    sum = t;
    cur = {cur.X + dx, y};
  }
  return (sum + comp) / (kTwoPi * static_cast<double>(n));
}

namespace {

double twistless_discriminant(const Params& p) {
  if (p.b() == 0.0) throw DomainError("twistless circles need b != 0");
  const double d = p.a() * p.a() - 3.0 * p.b();
  if (d < 0.0) throw DomainError("a^2 - 3b < 0: the map is twist everywhere");
  return d;
}

}  // namespace

TwistlessCircles twistless_circles(const Params& p) {
  const double s = std::sqrt(twistless_discriminant(p));
  TwistlessCircles c;
  c.y_c1 = (p.a() + s) / (3.0 * p.b());
  // (a - s) / (3b) rewritten as 1 / (a + s) to avoid cancellation for small b
  c.y_c2 = 1.0 / (p.a() + s);
  c.rho_c1 = rotation_profile(p, c.y_c1) / kTwoPi;
  c.rho_c2 = rotation_profile(p, c.y_c2) / kTwoPi;
  return c;
}

std::pair<double, double> extremal_rotation_numbers(const Params& p) {
  twistless_discriminant(p);
  // Evaluated as printed, in extended precision: the C2 numerator cancels
  // to O(b^2) for small |b|.
  using real = long double;
  const real a = p.a();
  const real b = p.b();
  const real s = std::sqrt(a * a - 3 * b);
  const real den = 54 * std::numbers::pi_v<real> * b * b;
  const real c1 = (-2 * a * a * a - 3 * a * a * s + 9 * a * b + (a * a + 6 * b) * s) / den;
  const real c2 = (-2 * a * a * a + 3 * a * a * s + 9 * a * b - (a * a + 6 * b) * s) / den;
  return {static_cast<double>(c1), static_cast<double>(c2)};
}

std::array<double, 4> step_jacobian(const Params& p, const PhasePoint& pt) {
  const double y = pt.y + p.k() * std::sin(pt.x);
  const double dy_dx = p.k() * std::cos(pt.x);
  const double fp = twist_derivative(p, y);
  return {1.0 + fp * dy_dx, fp, dy_dx, 1.0};
}

}  // namespace nontwist
