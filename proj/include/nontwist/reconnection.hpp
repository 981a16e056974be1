#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "nontwist/types.hpp"

// Reconnection thresholds of the interpolating Hamiltonian. Two chains
// reconnect when their hyperbolic equilibria lie on the same energy level:
//   I-II   : H(P1h) = H(P4h)
//   II-III : H(P4h) = H(P5h)
//   triple : both at once.

namespace nontwist {

/// 6b^2 + a^4 - 6a^2 b + 48 b^3 k + 4ab sqrt(a^2-4b) - a^3 sqrt(a^2-4b).
/// Equals 24 b^3 (H(P4h) - H(P1h)).
double residual_I_II(double a, double b, double k);

/// k at which chains II and III reconnect: a (a^2 - 4b)^{3/2} / (24 b^3).
double k_of_b_II_III(double a, double b);

/// k - k_of_b_II_III(a, b). Equals (H(P4h) - H(P5h)) / 2.
double residual_II_III(double a, double b, double k);

/// a^4 - 6a^2 b + 6b^2 + a (a^2 - 4b)^{3/2}; vanishes on the triple-reconnection curve.
double triple_residual(double a, double b);

using ResidualFn = std::function<double(double)>;

struct ScanOptions {
  std::size_t subintervals = 10000;
  double tol = 1e-12;
  int max_iterations = 200;
  /// Isolated points where the residual is undefined; no bracket may straddle one.
  std::vector<double> holes{0.0};
};

struct Root {
  double b = 0.0;
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int iterations = 0;
};

/// Scans [b_lo, b_hi] for sign changes and bisects each bracket. Points where
/// f throws DomainError are skipped. Roots come back in ascending order; an
/// empty result is not an error. Throws std::invalid_argument on a bad interval.
std::vector<Root> solve_threshold(const ResidualFn& f, double b_lo, double b_hi,
                                  const ScanOptions& opts = {});

enum class ThresholdKind { I_II, II_III, triple };
std::string_view to_string(ThresholdKind k);

struct ThresholdReport {
  ThresholdKind kind = ThresholdKind::I_II;
  double a = 0.0;
  std::optional<double> k;        // absent for the triple kind
  std::optional<double> k_triple; // present only for the triple kind
  std::pair<double, double> range{0.0, 0.0};
  std::vector<Root> roots;
};

/// Thresholds in b for one chain pair at fixed (a, k).
ThresholdReport thresholds(ThresholdKind kind, double a, double k, double b_lo, double b_hi,
                           const ScanOptions& opts = {});

struct TriplePoint {
  double b = 0.0;
  double k = 0.0;
  Root root;
  double residual_I_II = 0.0;
};

/// Search range for the triple point. The roots scale as a^2.
std::pair<double, double> default_triple_range(double a);

/// Solves triple_residual for b, sets k = k_of_b_II_III(a, b) and checks
/// that residual_I_II vanishes there. Throws NumericalError if no root is
/// found or the check fails.
TriplePoint triple_point(double a, double b_lo, double b_hi, const ScanOptions& opts = {});
TriplePoint triple_point(double a);

ThresholdReport triple_report(double a, double b_lo, double b_hi, const ScanOptions& opts = {});

enum class Regime { dimerised_pair, at_reconnection, birkhoff_pair, chains_absent };
enum class ChainPair { I_II, II_III };

std::string_view to_string(Regime r);
std::string_view to_string(ChainPair c);

struct RegimeLabel {
  double b = 0.0;
  ChainPair chain_pair = ChainPair::I_II;
  Regime regime = Regime::chains_absent;
};

/// |residual| at or below this reports at_reconnection.
inline constexpr double kReconnectionTolerance = 1e-9;

/// Regime of both neighbouring chain pairs at (a, k, b). I-II is dimerised
/// when H(P4h) > H(P1h) and II-III when H(P4h) > H(P5h); this orientation
/// matches the observed phase portraits at a = 1.5, k = 0.018 (I-II dimerised
/// at b = -4, II-III Birkhoff at b = 0.5). I-II counts as at_reconnection
/// only when both the residual and the energy gap r12 / (24 b^3) are within
/// kReconnectionTolerance. Throws DomainError at b = 0.
std::pair<RegimeLabel, RegimeLabel> regime(double a, double k, double b);

}  // namespace nontwist
