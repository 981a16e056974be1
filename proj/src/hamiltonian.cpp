#include "nontwist/hamiltonian.hpp"

#include <cmath>
#include <limits>

#include "nontwist/map.hpp"

namespace nontwist {

double energy_profile(const Params& p, double y) {
  const double y2 = y * y;
  return y2 * (-0.5 + y * (p.a() / 3.0 - y * p.b() / 4.0));
}

double energy(const Params& p, const PhasePoint& pt) {
  return energy_profile(p, pt.y) - p.k() * std::cos(pt.x);
}

Velocity vector_field(const Params& p, double x, double y) {
  return {rotation_profile(p, y), p.k() * std::sin(x)};
}

Velocity vector_field(const Params& p, const PhasePoint& pt) {
  return vector_field(p, pt.x, pt.y);
}

Matrix2 jacobian(const Params& p, const PhasePoint& pt) {
  return {{{0.0, twist_derivative(p, pt.y)}, {p.k() * std::cos(pt.x), 0.0}}};
}

PhasePoint reversal(const PhasePoint& pt) {
  return {normalize_angle(-pt.x), pt.y};
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::elliptic: return "elliptic";
    case Stability::hyperbolic: return "hyperbolic";
    case Stability::degenerate: return "degenerate";
  }
  return "unknown";
}

std::string_view to_string(Chain c) {
  switch (c) {
    case Chain::I: return "I";
    case Chain::II: return "II";
    case Chain::III: return "III";
  }
  return "unknown";
}

std::string_view to_string(EquilibriumLabel l) {
  static constexpr std::array<std::string_view, 8> names{"P1", "P2", "P3", "P4",
                                                         "P5", "P6", "A",  "B"};
  return names[static_cast<std::size_t>(l)];
}

double eigenvalue_squared(const Params& p, const PhasePoint& pt) {
  // cos is evaluated exactly on the symmetry lines
  const double c = pt.x == 0.0 ? 1.0 : (pt.x == kPi ? -1.0 : std::cos(pt.x));
  return p.k() * c * twist_derivative(p, pt.y);
}

Stability classify(double lambda_squared) {
  if (std::abs(lambda_squared) <= kDegeneracyTolerance) return Stability::degenerate;
  return lambda_squared > 0.0 ? Stability::hyperbolic : Stability::elliptic;
}

namespace {

// a^2 - 4b, snapped to zero when it vanishes up to rounding.
double chain_discriminant(const Params& p) {
  const double a2 = p.a() * p.a();
  const double d = a2 - 4.0 * p.b();
  const double scale = std::max(a2, 4.0 * std::abs(p.b()));
  if (std::abs(d) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) return 0.0;
  return d;
}

Equilibrium make_equilibrium(const Params& p, PhasePoint pos, Chain chain, EquilibriumLabel label) {
  Equilibrium e;
  e.position = pos;
  e.eigenvalue_squared = eigenvalue_squared(p, pos);
  e.stability = classify(e.eigenvalue_squared);
  e.chain = chain;
  e.label = label;
  return e;
}

}  // namespace

std::optional<std::pair<double, double>> chain_roots(const Params& p) {
  if (p.b() == 0.0) throw DomainError("b = 0: chains II and III are not defined");
  const double d = chain_discriminant(p);
  if (d < 0.0) return std::nullopt;
  const double s = std::sqrt(d);
  // (a - s) / (2b) == 2 / (a + s); the second form does not cancel
  return std::pair{2.0 / (p.a() + s), (p.a() + s) / (2.0 * p.b())};
}

std::vector<Equilibrium> equilibria(const Params& p) {
  using L = EquilibriumLabel;
  std::vector<Equilibrium> out;
  out.push_back(make_equilibrium(p, {0.0, 0.0}, Chain::I, L::P1));
  out.push_back(make_equilibrium(p, {kPi, 0.0}, Chain::I, L::P2));
  const auto roots = chain_roots(p);
  if (!roots) return out;
  if (chain_discriminant(p) == 0.0) {
    const double y = 1.0 / std::sqrt(p.b());
    Equilibrium a = make_equilibrium(p, {0.0, y}, Chain::II, L::A);
    Equilibrium b = make_equilibrium(p, {kPi, y}, Chain::II, L::B);
    // F'(1/sqrt(b)) vanishes identically on a^2 = 4b
    a.stability = b.stability = Stability::degenerate;
    out.push_back(a);
    out.push_back(b);
    return out;
  }
  const auto [y_minus, y_plus] = *roots;
  out.push_back(make_equilibrium(p, {0.0, y_minus}, Chain::II, L::P3));
  out.push_back(make_equilibrium(p, {kPi, y_minus}, Chain::II, L::P4));
  out.push_back(make_equilibrium(p, {0.0, y_plus}, Chain::III, L::P5));
  out.push_back(make_equilibrium(p, {kPi, y_plus}, Chain::III, L::P6));
  return out;
}

std::optional<Equilibrium> find_equilibrium(const std::vector<Equilibrium>& eqs,
                                            EquilibriumLabel label) {
  for (const auto& e : eqs)
    if (e.label == label) return e;
  return std::nullopt;
}

std::optional<Equilibrium> chain_saddle(const std::vector<Equilibrium>& eqs, Chain chain) {
  for (const auto& e : eqs)
    if (e.chain == chain && e.stability == Stability::hyperbolic) return e;
  return std::nullopt;
}

bool SymmetryLine::contains(const PhasePoint& pt, double tol) const {
  return std::abs(angle_difference(pt.x, x0)) <= tol;
}

}  // namespace nontwist
