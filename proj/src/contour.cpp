#include "nontwist/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "nontwist/hamiltonian.hpp"

namespace nontwist {

namespace {

struct Grid {
  const Window& w;
  double dx;
  double dy;
  std::vector<double> v;  // H - level, index i * ny + j

  Grid(const Params& p, double level, const Window& win)
      : w(win),
        dx((win.x_max - win.x_min) / (win.nx - 1)),
        dy((win.y_max - win.y_min) / (win.ny - 1)),
        v(static_cast<std::size_t>(win.nx) * win.ny) {
    for (int i = 0; i < w.nx; ++i)
      for (int j = 0; j < w.ny; ++j) v[idx(i, j)] = energy(p, {x(i), y(j)}) - level;
  }

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * w.ny + j; }
  double at(int i, int j) const { return v[idx(i, j)]; }
  double x(int i) const { return i == w.nx - 1 ? w.x_max : w.x_min + i * dx; }
  double y(int j) const { return j == w.ny - 1 ? w.y_max : w.y_min + j * dy; }
};

// Edge ids: horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1).
class EdgeIndex {
 public:
  EdgeIndex(const Window& w) : nx_(w.nx), ny_(w.ny), periodic_(w.periodic()) {}
  long horizontal(int i, int j) const { return static_cast<long>(j) * (nx_ - 1) + i; }
  long vertical(int i, int j) const {
    if (periodic_ && i == nx_ - 1) i = 0;
    return static_cast<long>(nx_ - 1) * ny_ + static_cast<long>(j) * nx_ + i;
  }

 private:
  int nx_;
  int ny_;
  bool periodic_;
};

double crossing(double v0, double v1) { return v0 / (v0 - v1); }

}  // namespace

double cell_energy_variation(const Params& p, const Window& w) {
  w.validate();
  const Grid g(p, 0.0, w);
  double worst = 0.0;
  for (int i = 0; i + 1 < w.nx; ++i)
    for (int j = 0; j + 1 < w.ny; ++j) {
      const std::array<double, 4> c{g.at(i, j), g.at(i + 1, j), g.at(i + 1, j + 1), g.at(i, j + 1)};
      const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
      worst = std::max(worst, *hi - *lo);
    }
  return worst;
}

std::vector<Trace> level_curves(const Params& p, double level, const Window& w) {
  w.validate();
  const Grid g(p, level, w);
  const EdgeIndex ids(w);

  std::unordered_map<long, PhasePoint> where;
  std::unordered_map<long, std::array<long, 2>> links;  // -1 marks a free slot
  auto point_on = [&](long id, double xa, double ya, double xb, double yb, double va, double vb) {
    if (where.count(id)) return;
    const double t = crossing(va, vb);
    where[id] = {normalize_angle(xa + t * (xb - xa)), ya + t * (yb - ya)};
  };
  auto link = [&](long e1, long e2) {
    for (auto [a, b] : {std::pair{e1, e2}, std::pair{e2, e1}}) {
      auto it = links.try_emplace(a, std::array<long, 2>{-1, -1}).first;
      if (it->second[0] == -1) it->second[0] = b;
      else it->second[1] = b;
    }
  };

  for (int i = 0; i + 1 < w.nx; ++i) {
    for (int j = 0; j + 1 < w.ny; ++j) {
      const double v00 = g.at(i, j), v10 = g.at(i + 1, j), v11 = g.at(i + 1, j + 1), v01 = g.at(i, j + 1);
      const int c = (v00 >= 0) | (v10 >= 0) << 1 | (v11 >= 0) << 2 | (v01 >= 0) << 3;
      if (c == 0 || c == 15) continue;
      const double x0 = g.x(i), x1 = g.x(i + 1), y0 = g.y(j), y1 = g.y(j + 1);
      const long bottom = ids.horizontal(i, j), top = ids.horizontal(i, j + 1);
      const long left = ids.vertical(i, j), right = ids.vertical(i + 1, j);
      if ((v00 >= 0) != (v10 >= 0)) point_on(bottom, x0, y0, x1, y0, v00, v10);
      if ((v01 >= 0) != (v11 >= 0)) point_on(top, x0, y1, x1, y1, v01, v11);
      if ((v00 >= 0) != (v01 >= 0)) point_on(left, x0, y0, x0, y1, v00, v01);
      if ((v10 >= 0) != (v11 >= 0)) point_on(right, x1, y0, x1, y1, v10, v11);
      const bool centre = 0.25 * (v00 + v10 + v11 + v01) >= 0;
      switch (c) {
        case 1: case 14: link(left, bottom); break;
        case 2: case 13: link(bottom, right); break;
        case 3: case 12: link(left, right); break;
        case 4: case 11: link(right, top); break;
        case 6: case 9: link(bottom, top); break;
        case 7: case 8: link(left, top); break;
        case 5:
          if (centre) { link(bottom, right); link(top, left); }
          else { link(left, bottom); link(right, top); }
          break;
        case 10:
          if (centre) { link(left, bottom); link(right, top); }
          else { link(bottom, right); link(top, left); }
          break;
        default: break;
      }
    }
  }

  // Walk the edge graph. Open chains start at edges with one link; the rest are loops.
  std::vector<long> order;
  order.reserve(links.size());
  for (const auto& [id, _] : links) order.push_back(id);
  std::sort(order.begin(), order.end());

  std::unordered_map<long, bool> used;
  std::vector<Trace> out;
  auto walk = [&](long start) {
    Trace t;
    t.source = TraceSource::contour;
    t.metadata.params = p;
    t.metadata.level = level;
    t.metadata.window = w;
    long prev = -1;
    long cur = start;
    while (cur != -1 && !used[cur]) {
      used[cur] = true;
      t.points.push_back(where.at(cur));
      const auto& nb = links.at(cur);
      long next = nb[0] != prev ? nb[0] : nb[1];
      if (nb[0] == nb[1]) next = -1;
      prev = cur;
      cur = next;
    }
    if (cur == start && t.points.size() > 2) t.points.push_back(t.points.front());
    for (const auto& q : t.points) t.energies.push_back(energy(p, q));
    if (!t.points.empty()) out.push_back(std::move(t));
  };
  for (long id : order)
    if (!used[id] && links.at(id)[1] == -1) walk(id);
  for (long id : order)
    if (!used[id]) walk(id);
  return out;
}

bool is_meander(const Trace& t, const MeanderOptions& opts) {
  const auto& pts = t.points;
  if (pts.size() < 2) return false;

  double y_tol = opts.y_tol;
  if (!(y_tol > 0.0)) {
    double height;
    if (t.metadata.window) {
      height = t.metadata.window->height();
    } else {
      const auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(),
                                                [](const auto& a, const auto& b) { return a.y < b.y; });
      height = hi->y - lo->y;
    }
    y_tol = 1e-3 * height;
  }

  if (t.source != TraceSource::map_orbit) {
    const auto xs = unwrapped_x(t);
    const double dir = xs.back() >= xs.front() ? 1.0 : -1.0;
    double extreme = dir * xs.front();
    for (double x : xs) {
      const double s = dir * x;
      if (s < extreme - opts.x_tol) return true;
      extreme = std::max(extreme, s);
    }
  }

  // Vertical-line test on the circle: any two samples close in x but apart in y.
  std::vector<std::size_t> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return pts[a].x < pts[b].x; });
  const std::size_t n = idx.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PhasePoint& a = pts[idx[i]];
    for (std::size_t step = 1; step < n; ++step) {
      const PhasePoint& b = pts[idx[(i + step) % n]];
      const double gap = i + step < n ? b.x - a.x : b.x + kTwoPi - a.x;
      if (gap > opts.x_tol) break;
      if (std::abs(b.y - a.y) > y_tol) return true;
    }
  }
  return false;
}

}  // namespace nontwist
