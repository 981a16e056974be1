#include "nontwist/cli/svg.hpp"

#include <sstream>

#include "nontwist/cli/dataset.hpp"

namespace nontwist::cli {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMargin = 40.0;

struct Viewport {
  const Window& w;
  double sx() const { return (kWidth - 2 * kMargin) / (w.x_max - w.x_min); }
  double sy() const { return (kHeight - 2 * kMargin) / (w.y_max - w.y_min); }
  double px(double x) const { return kMargin + (x - w.x_min) * sx(); }
  double py(double y) const { return kHeight - kMargin - (y - w.y_min) * sy(); }
};

std::string fmt(double v) {
  // two decimals are plenty at this viewport size
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << v;
  return s.str();
}

const char* colour(TraceSource s) {
  switch (s) {
    case TraceSource::separatrix: return "#c0392b";
    case TraceSource::contour: return "#2c7fb8";
    case TraceSource::map_orbit: return "#555555";
    case TraceSource::flow: return "#222222";
  }
  return "#000000";
}

}  // namespace

std::string render_svg(const Window& w, const std::vector<Trace>& traces,
                       const std::vector<Equilibrium>& equilibria, const std::string& title) {
  const Viewport vp{w};
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" "
       "version=\"1.1\" width=\""
    << kWidth << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  o << "<title>" << title << "</title>\n";
  o << "<defs><clipPath id=\"frame\"><rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\""
    << kWidth - 2 * kMargin << "\" height=\"" << kHeight - 2 * kMargin << "\"/></clipPath></defs>\n";
  o << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin
    << "\" height=\"" << kHeight - 2 * kMargin << "\" fill=\"white\" stroke=\"black\"/>\n";

  o << "<g clip-path=\"url(#frame)\">\n";
  for (double x0 : {0.0, kPi}) {
    if (x0 < w.x_min || x0 > w.x_max) continue;
    o << "<line x1=\"" << fmt(vp.px(x0)) << "\" y1=\"" << kMargin << "\" x2=\"" << fmt(vp.px(x0))
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"#888888\" stroke-dasharray=\"6,4\"/>\n";
  }
  // Each trace is one polyline in unwrapped x; shifted copies by +-2pi
  // show the parts that wrap around the cylinder.
  const double period = kTwoPi * vp.sx();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const Trace& t = traces[i];
    if (t.points.empty()) continue;
    const auto xs = unwrapped_x(t);
    o << "<polyline id=\"t" << i << "\" class=\"" << to_string(t.source) << "\" fill=\"none\" stroke=\""
      << colour(t.source) << "\" stroke-width=\"0.8\" points=\"";
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k) o << ' ';
      o << fmt(vp.px(xs[k])) << ',' << fmt(vp.py(t.points[k].y));
    }
    o << "\"/>\n";
    for (double shift : {-period, period, -2 * period, 2 * period})
      o << "<use xlink:href=\"#t" << i << "\" transform=\"translate(" << fmt(shift) << ",0)\"/>\n";
  }
  for (const auto& e : equilibria) {
    const double cx = vp.px(e.position.x);
    const double cy = vp.py(e.position.y);
    switch (e.stability) {
      case Stability::elliptic:
        o << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"4\" fill=\"#1a9850\"/>\n";
        break;
      case Stability::hyperbolic:
        o << "<rect x=\"" << fmt(cx - 4) << "\" y=\"" << fmt(cy - 4)
          << "\" width=\"8\" height=\"8\" fill=\"#d73027\"/>\n";
        break;
      case Stability::degenerate:
        o << "<polygon points=\"" << fmt(cx) << ',' << fmt(cy - 5) << ' ' << fmt(cx + 5) << ',' << fmt(cy)
          << ' ' << fmt(cx) << ',' << fmt(cy + 5) << ' ' << fmt(cx - 5) << ',' << fmt(cy)
          << "\" fill=\"#7b3294\"/>\n";
        break;
    }
    o << "<text x=\"" << fmt(cx + 6) << "\" y=\"" << fmt(cy - 6) << "\" font-size=\"11\">"
      << to_string(e.label) << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << kMargin << "\" y=\"" << kMargin - 12 << "\" font-size=\"13\">" << title << "</text>\n";
  o << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 12 << "\" font-size=\"11\">x in ["
    << format_number(w.x_min) << ", " << format_number(w.x_max) << "], y in [" << format_number(w.y_min)
    << ", " << format_number(w.y_max) << "]</text>\n";
  o << "</svg>\n";
  return o.str();
}

}  // namespace nontwist::cli
