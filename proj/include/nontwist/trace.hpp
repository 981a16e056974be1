#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nontwist/types.hpp"

namespace nontwist {

enum class TraceSource { map_orbit, flow, contour, separatrix };

std::string_view to_string(TraceSource s);

/// Rectangular sampling window on the annulus.
struct Window {
  double x_min = 0.0;
  double x_max = kTwoPi;
  double y_min = -1.0;
  double y_max = 1.0;
  int nx = 256;
  int ny = 256;

  void validate() const;
  double height() const { return y_max - y_min; }
  bool contains_y(double y) const { return y >= y_min && y <= y_max; }
  /// True when the x-range covers the whole circle, so contours wrap.
  bool periodic() const;
};

/// Settings a trace was produced with. Fields not relevant to a source stay empty.
struct TraceMetadata {
  Params params{1.5, 0.0, 0.0};
  std::optional<double> dt;
  std::optional<long> n_steps;
  std::optional<double> energy_drift_budget;
  std::optional<double> max_energy_drift;
  std::optional<double> level;
  std::optional<Window> window;
};

struct Trace {
  std::vector<PhasePoint> points;
  std::vector<double> energies;
  TraceSource source = TraceSource::flow;
  TraceMetadata metadata;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// x-coordinates of a trace made continuous by adding multiples of 2pi
/// whenever consecutive samples jump by more than pi.
std::vector<double> unwrapped_x(const Trace& t);

}  // namespace nontwist
