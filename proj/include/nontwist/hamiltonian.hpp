#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "nontwist/types.hpp"

// Interpolating Hamiltonian of the cubic map,
//   H(x, y) = -y^2/2 + a y^3/3 - b y^4/4 - k cos x,
// with vector field X_H = (-dH/dy, dH/dx) = (F(y), k sin x).

namespace nontwist {

double energy(const Params& p, const PhasePoint& pt);

/// The y-dependent part of H, i.e. H(x, y) + k cos x.
double energy_profile(const Params& p, double y);

struct Velocity {
  double dx_dt = 0.0;
  double dy_dt = 0.0;
};

Velocity vector_field(const Params& p, const PhasePoint& pt);
Velocity vector_field(const Params& p, double x, double y);

/// Row-major 2x2 matrix.
using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Linearization [[0, F'(y)], [k cos x, 0]] of the vector field.
Matrix2 jacobian(const Params& p, const PhasePoint& pt);

/// R(x, y) = (-x mod 2pi, y).
PhasePoint reversal(const PhasePoint& pt);

enum class Stability { elliptic, hyperbolic, degenerate };
enum class Chain { I, II, III };
enum class EquilibriumLabel { P1, P2, P3, P4, P5, P6, A, B };

std::string_view to_string(Stability s);
std::string_view to_string(Chain c);
std::string_view to_string(EquilibriumLabel l);

/// Symmetric equilibrium of X_H. Labels are positional: P1/P2 on y = 0,
/// P3/P4 on the root (a - sqrt(a^2 - 4b)) / (2b), P5/P6 on the other root,
/// odd labels on x = 0. Stability always comes from the eigenvalues.
struct Equilibrium {
  PhasePoint position;
  Stability stability = Stability::degenerate;
  double eigenvalue_squared = 0.0;
  Chain chain = Chain::I;
  EquilibriumLabel label = EquilibriumLabel::P1;
};

/// |lambda^2| at or below this is classified degenerate.
inline constexpr double kDegeneracyTolerance = 1e-12;

/// lambda^2 = k cos x F'(y) at an equilibrium on a symmetry line.
double eigenvalue_squared(const Params& p, const PhasePoint& pt);

Stability classify(double lambda_squared);

/// Non-zero roots of b y^2 - a y + 1 = 0 as (y_minus, y_plus), keyed to the
/// sign in front of the square root, or nullopt when a^2 - 4b < 0.
/// Throws DomainError when b == 0.
std::optional<std::pair<double, double>> chain_roots(const Params& p);

/// All equilibria on the symmetry lines x = 0 and x = pi: six when
/// a^2 > 4b, four when a^2 = 4b (A and B degenerate), two otherwise.
/// Throws DomainError when b == 0.
std::vector<Equilibrium> equilibria(const Params& p);

/// Finds the equilibrium with the given label, if present.
std::optional<Equilibrium> find_equilibrium(const std::vector<Equilibrium>& eqs,
                                            EquilibriumLabel label);

/// The hyperbolic member of a chain, if the chain exists and has one.
std::optional<Equilibrium> chain_saddle(const std::vector<Equilibrium>& eqs, Chain chain);

/// Fixed set of R: x = 0 or x = pi.
struct SymmetryLine {
  double x0 = 0.0;
  bool contains(const PhasePoint& pt, double tol = 1e-12) const;
};

inline constexpr std::array<SymmetryLine, 2> kSymmetryLines{SymmetryLine{0.0}, SymmetryLine{kPi}};

}  // namespace nontwist
