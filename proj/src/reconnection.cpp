#include "nontwist/reconnection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nontwist {

namespace {

double chain_surd(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("non-finite parameter");
  if (b == 0.0) throw DomainError("b = 0: chains II and III are not defined");
  const double d = a * a - 4.0 * b;
  if (d < 0.0) throw DomainError("a^2 - 4b < 0: chains II and III are absent");
  return std::sqrt(d);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

double residual_I_II(double a, double b, double k) {
  const double s = chain_surd(a, b);
  const double a2 = a * a;
  return 6.0 * b * b + a2 * a2 - 6.0 * a2 * b + 48.0 * b * b * b * k + 4.0 * a * b * s -
         a2 * a * s;
}

double k_of_b_II_III(double a, double b) {
  const double s = chain_surd(a, b);
  return a / (24.0 * b * b * b) * (s * s) * s;
}

double residual_II_III(double a, double b, double k) { return k - k_of_b_II_III(a, b); }

double triple_residual(double a, double b) {
  const double s = chain_surd(a, b);
  const double a2 = a * a;
  return a2 * a2 - 6.0 * a2 * b + 6.0 * b * b + a * (s * s) * s;
}

std::vector<Root> solve_threshold(const ResidualFn& f, double b_lo, double b_hi,
                                  const ScanOptions& opts) {
  if (!std::isfinite(b_lo) || !std::isfinite(b_hi) || !(b_lo < b_hi))
    throw std::invalid_argument("threshold interval must satisfy lo < hi");
  if (opts.subintervals < 1) throw std::invalid_argument("need at least one subinterval");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  auto eval = [&](double b) -> std::optional<double> {
    try {
      const double v = f(b);
      if (std::isfinite(v)) return v;
    } catch (const DomainError&) {
    }
    return std::nullopt;
  };
  auto straddles_hole = [&](double lo, double hi) {
    return std::any_of(opts.holes.begin(), opts.holes.end(),
                       [&](double h) { return h >= lo && h <= hi; });
  };

  const std::size_t n = opts.subintervals;
  const double width = b_hi - b_lo;
  std::vector<double> grid(n + 1);
  std::vector<std::optional<double>> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid[i] = i == n ? b_hi : b_lo + width * static_cast<double>(i) / static_cast<double>(n);
    const bool is_hole = std::find(opts.holes.begin(), opts.holes.end(), grid[i]) != opts.holes.end();
    values[i] = is_hole ? std::nullopt : eval(grid[i]);
  }

  std::vector<Root> roots;
  for (std::size_t i = 0; i <= n; ++i) {
    // a residual that is exactly zero on the grid is its own root
    if (values[i] && *values[i] == 0.0) {
      const double lo = grid[i == 0 ? 0 : i - 1];
      const double hi = grid[i == n ? n : i + 1];
      roots.push_back({grid[i], 0.0, lo, hi, 0});
    }
    if (i == n) break;
    const auto& fl = values[i];
    const auto& fh = values[i + 1];
    if (!fl || !fh || *fl == 0.0 || *fh == 0.0) continue;
    if (sign(*fl) == sign(*fh)) continue;
    double lo = grid[i];
    double hi = grid[i + 1];
    if (straddles_hole(lo, hi)) continue;

    double f_lo = *fl;
    int it = 0;
    double mid = 0.5 * (lo + hi);
    double f_mid = f_lo;
    bool exact = false;
    while (hi - lo > opts.tol && it < opts.max_iterations) {
      mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      ++it;
      const auto v = eval(mid);
      if (!v) throw NumericalError("residual undefined inside a bracket");
      f_mid = *v;
      if (f_mid == 0.0) {
        exact = true;
        break;
      }
      if (sign(f_mid) == sign(f_lo)) {
        lo = mid;
        f_lo = f_mid;
      } else {
        hi = mid;
      }
    }
    const double b_root = exact ? mid : 0.5 * (lo + hi);
    const double r = exact ? 0.0 : f(b_root);
    roots.push_back({b_root, r, grid[i], grid[i + 1], it});
  }
  return roots;
}

std::string_view to_string(ThresholdKind k) {
  switch (k) {
    case ThresholdKind::I_II: return "I_II";
    case ThresholdKind::II_III: return "II_III";
    case ThresholdKind::triple: return "triple";
  }
  return "unknown";
}

ThresholdReport thresholds(ThresholdKind kind, double a, double k, double b_lo, double b_hi,
                           const ScanOptions& opts) {
  if (kind == ThresholdKind::triple) return triple_report(a, b_lo, b_hi, opts);
  ThresholdReport r;
  r.kind = kind;
  r.a = a;
  r.k = k;
  r.range = {b_lo, b_hi};
  if (kind == ThresholdKind::I_II)
    r.roots = solve_threshold([=](double b) { return residual_I_II(a, b, k); }, b_lo, b_hi, opts);
  else
    r.roots = solve_threshold([=](double b) { return residual_II_III(a, b, k); }, b_lo, b_hi, opts);
  return r;
}

std::pair<double, double> default_triple_range(double a) {
  // triple_residual(a, a^2 beta) = a^4 g(beta) with a single root in (0, 1/4]
  return {1e-3 * a * a, 0.25 * a * a};
}

TriplePoint triple_point(double a, double b_lo, double b_hi, const ScanOptions& opts) {
  if (!(a > 0.0)) throw DomainError("a must be > 0");
  const auto roots = solve_threshold([=](double b) { return triple_residual(a, b); }, b_lo, b_hi, opts);
  if (roots.empty()) throw NumericalError("no triple-reconnection root in the given range");
  TriplePoint t;
  t.root = roots.front();
  t.b = t.root.b;
  t.k = k_of_b_II_III(a, t.b);
  t.residual_I_II = residual_I_II(a, t.b, t.k);
  if (!(std::abs(t.residual_I_II) <= 1e-9))
    throw NumericalError("triple point fails the I-II residual cross-check");
  return t;
}

TriplePoint triple_point(double a) {
  const auto [lo, hi] = default_triple_range(a);
  return triple_point(a, lo, hi);
}

ThresholdReport triple_report(double a, double b_lo, double b_hi, const ScanOptions& opts) {
  const TriplePoint t = triple_point(a, b_lo, b_hi, opts);
  ThresholdReport r;
  r.kind = ThresholdKind::triple;
  r.a = a;
  r.k_triple = t.k;
  r.range = {b_lo, b_hi};
  r.roots.push_back(t.root);
  return r;
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::dimerised_pair: return "dimerised_pair";
    case Regime::at_reconnection: return "at_reconnection";
    case Regime::birkhoff_pair: return "birkhoff_pair";
    case Regime::chains_absent: return "chains_absent";
  }
  return "unknown";
}

std::string_view to_string(ChainPair c) {
  return c == ChainPair::I_II ? "I_II" : "II_III";
}

std::pair<RegimeLabel, RegimeLabel> regime(double a, double k, double b) {
  if (b == 0.0) throw DomainError("b = 0: regime undefined");
  RegimeLabel first{b, ChainPair::I_II, Regime::chains_absent};
  RegimeLabel second{b, ChainPair::II_III, Regime::chains_absent};
  if (a * a - 4.0 * b < 0.0) return {first, second};

  const double r12 = residual_I_II(a, b, k);
  const double r23 = residual_II_III(a, b, k);
  // r12 = 24 b^3 (H(P4h) - H(P1h)). The b^3 factor sets the orientation
  // and, near b = 0, would push any r12 under the tolerance, so the energy
  // gap has to be small as well.
  const double oriented12 = b > 0.0 ? r12 : -r12;
  const double gap12 = r12 / (24.0 * b * b * b);
  auto pick = [](double oriented, bool small) {
    if (small) return Regime::at_reconnection;
    return oriented > 0.0 ? Regime::dimerised_pair : Regime::birkhoff_pair;
  };
  first.regime = pick(oriented12, std::abs(r12) <= kReconnectionTolerance &&
                                      std::abs(gap12) <= kReconnectionTolerance);
  second.regime = pick(r23, std::abs(r23) <= kReconnectionTolerance);
  return {first, second};
}

}  // namespace nontwist
