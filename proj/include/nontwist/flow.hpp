#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nontwist/hamiltonian.hpp"
#include "nontwist/reconnection.hpp"
#include "nontwist/trace.hpp"

namespace nontwist {

enum class Direction { forward, backward };

/// One classical Runge-Kutta step of X_H on the lift; h may be negative.
LiftPoint rk4_step(const Params& p, const LiftPoint& s, double h);

/// Default drift budget 1e-8 (1 + |H0|) sqrt(n_steps).
double default_drift_budget(double h0, long n_steps);

struct IntegrateOptions {
  /// Overrides default_drift_budget when set.
  std::optional<double> drift_budget;
  /// Record every stride-th sample (the last one is always kept).
  long record_stride = 1;
};

/// Fixed-step RK4 integration of +-X_H for n_steps steps of size dt.
/// Samples are stored with x wrapped to [0, 2pi). Throws NumericalError
/// when |H - H0| exceeds the drift budget at any step.
Trace integrate(const Params& p, const PhasePoint& start, double dt, long n_steps,
                Direction direction = Direction::forward, const IntegrateOptions& opts = {});

enum class TerminalKind { returned_to_saddle, reached_other_saddle, left_window, step_budget };
std::string_view to_string(TerminalKind t);

struct TerminalEvent {
  TerminalKind kind = TerminalKind::step_budget;
  std::optional<EquilibriumLabel> other;  // set for reached_other_saddle
};

enum class BranchKind { unstable_plus, unstable_minus, stable_plus, stable_minus };
std::string_view to_string(BranchKind b);

struct SeparatrixBranch {
  BranchKind kind = BranchKind::unstable_plus;
  PhasePoint seed;
  /// Unit eigenvector the seed was placed along (before the +- sign).
  std::array<double, 2> direction{0.0, 0.0};
  Trace trace;
  TerminalEvent terminal;
  /// Closest approach to each other saddle in the window, in saddle order.
  std::vector<std::pair<EquilibriumLabel, double>> min_distance;
  long steps = 0;
};

struct SeparatrixSettings {
  /// Seed offset; <= 0 selects 1e-6 (1 + |y_saddle|).
  double eps = 0.0;
  /// Radius of the ball around a saddle that counts as arrival.
  double arrival_radius = 1e-2;
  double dt = 0.02;
  long step_budget = 100000;
  long record_stride = 10;
  /// Branches stop when y leaves [y_min, y_max]. Empty selects a window
  /// spanning every equilibrium with a margin of 0.5 + 0.25 * spread.
  std::optional<Window> window;
};

struct SeparatrixBundle {
  Equilibrium saddle;
  double eps = 0.0;
  std::array<SeparatrixBranch, 4> branches;
};

/// Window used by separatrices() when none is given.
Window default_window(const Params& p);

/// Unit eigenvectors (unstable, stable) of the linearization at a saddle.
std::pair<std::array<double, 2>, std::array<double, 2>> saddle_eigenvectors(const Params& p,
                                                                             const Equilibrium& saddle);

/// Traces the four invariant-manifold branches of a hyperbolic equilibrium.
/// Unstable branches run forward in time, stable branches backward.
SeparatrixBundle separatrices(const Params& p, const Equilibrium& saddle,
                              const SeparatrixSettings& settings = {});

enum class Topology { separated, connected, ambiguous };
std::string_view to_string(Topology t);

struct TopologySettings {
  SeparatrixSettings separatrix;
  /// Minimum approach above which the chains count as separated.
  double separation_floor = 1e-1;
};

struct TopologyResult {
  Topology verdict = Topology::ambiguous;
  double min_distance = 0.0;
  EquilibriumLabel saddle_a = EquilibriumLabel::P1;
  EquilibriumLabel saddle_b = EquilibriumLabel::P4;
};

/// Decides whether the saddles of two neighbouring chains share a manifold
/// branch. Throws DomainError when either saddle is missing.
TopologyResult chain_topology(const Params& p, ChainPair pair, const TopologySettings& settings = {});

struct PortraitSettings {
  double dt = 0.05;
  long n_steps = 8000;
  bool include_separatrices = true;
  SeparatrixSettings separatrix;
  long record_stride = 4;
};

struct PortraitFailure {
  /// Index of the failing seed, or empty when a separatrix failed.
  std::optional<std::size_t> seed_index;
  std::optional<EquilibriumLabel> saddle;
  std::string message;
};

struct Portrait {
  std::vector<Trace> traces;
  std::vector<PortraitFailure> failures;
  /// Number of leading traces that came from seeds.
  std::size_t seed_traces = 0;
};

/// Evenly spaced seeds on the symmetry lines x = 0 and x = pi.
std::vector<PhasePoint> default_seeds(const Window& w, int per_line = 12);

/// Integrates every seed half the time backward and half forward and joins
/// the pieces in time order, then appends the separatrix branches of every
/// hyperbolic equilibrium inside the window. Seeds whose integration fails
/// are reported in failures; the batch continues.
Portrait portrait(const Params& p, const Window& w, const std::vector<PhasePoint>& seeds,
                  const PortraitSettings& settings = {});

}  // namespace nontwist
