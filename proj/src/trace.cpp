#include "nontwist/trace.hpp"

#include <cmath>

namespace nontwist {

std::string_view to_string(TraceSource s) {
  switch (s) {
    case TraceSource::map_orbit: return "map_orbit";
    case TraceSource::flow: return "flow";
    case TraceSource::contour: return "contour";
    case TraceSource::separatrix: return "separatrix";
  }
  return "unknown";
}

void Window::validate() const {
  if (nx < 2 || ny < 2) throw DomainError("window resolution must be at least 2x2");
  if (!(y_min < y_max)) throw DomainError("window y_min must be < y_max");
  if (!(x_min < x_max)) throw DomainError("window x_min must be < x_max");
  if (!std::isfinite(y_min) || !std::isfinite(y_max))
    throw DomainError("window bounds must be finite");
}

bool Window::periodic() const {
  return std::abs((x_max - x_min) - kTwoPi) <= 1e-12;
}

std::vector<double> unwrapped_x(const Trace& t) {
  std::vector<double> xs;
  xs.reserve(t.points.size());
  double offset = 0.0;
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    double x = t.points[i].x;
    if (i > 0) {
      const double prev = t.points[i - 1].x;
      if (x - prev > kPi) offset -= kTwoPi;
      else if (x - prev < -kPi) offset += kTwoPi;
    }
    xs.push_back(x + offset);
  }
  return xs;
}

}  // namespace nontwist
