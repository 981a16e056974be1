#pragma once

#include <string>
#include <vector>

#include "nontwist/hamiltonian.hpp"
#include "nontwist/trace.hpp"

namespace nontwist::cli {

/// SVG 1.1 document with one polyline per trace, markers for the equilibria
/// and dashed symmetry lines at x = 0 and x = pi.
std::string render_svg(const Window& w, const std::vector<Trace>& traces,
                       const std::vector<Equilibrium>& equilibria, const std::string& title);

}  // namespace nontwist::cli
