#pragma once

#include <vector>

#include "nontwist/trace.hpp"

namespace nontwist {

/// Polylines of H(x, y) = level on the window grid, from marching squares
/// with linear interpolation along cell edges. Ambiguous saddle cells are
/// resolved with the cell-centre average. On a full-circle window the
/// curves are stitched across x = 2pi ~ 0. Returns an empty list when the
/// level does not cross the window.
std::vector<Trace> level_curves(const Params& p, double level, const Window& w);

/// Largest variation of H across one grid cell of the window; the
/// interpolation error of level_curves is bounded by it.
double cell_energy_variation(const Params& p, const Window& w);

struct MeanderOptions {
  double x_tol = kTwoPi / 1000.0;
  /// <= 0 selects 1e-3 times the window height recorded in the trace
  /// metadata, or the trace's own y-extent when there is none.
  double y_tol = 0.0;
};

/// True when the curve is not the graph of a function of x: either the
/// unwrapped x-sequence folds back by more than x_tol, or two samples lie
/// within x_tol of each other in x but more than y_tol apart in y.
/// Map-orbit traces are unordered in x, so only the second test applies.
bool is_meander(const Trace& t, const MeanderOptions& opts = {});

}  // namespace nontwist
