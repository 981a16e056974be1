#include "nontwist/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nontwist/map.hpp"

namespace nontwist {

LiftPoint rk4_step(const Params& p, const LiftPoint& s, double h) {
  const auto f = [&](double x, double y) { return vector_field(p, x, y); };
  const Velocity k1 = f(s.X, s.Y);
  const Velocity k2 = f(s.X + 0.5 * h * k1.dx_dt, s.Y + 0.5 * h * k1.dy_dt);
  const Velocity k3 = f(s.X + 0.5 * h * k2.dx_dt, s.Y + 0.5 * h * k2.dy_dt);
  const Velocity k4 = f(s.X + h * k3.dx_dt, s.Y + h * k3.dy_dt);
  return {s.X + h / 6.0 * (k1.dx_dt + 2.0 * k2.dx_dt + 2.0 * k3.dx_dt + k4.dx_dt),
          s.Y + h / 6.0 * (k1.dy_dt + 2.0 * k2.dy_dt + 2.0 * k3.dy_dt + k4.dy_dt)};
}

double default_drift_budget(double h0, long n_steps) {
  return 1e-8 * (1.0 + std::abs(h0)) * std::sqrt(static_cast<double>(std::max(n_steps, 1L)));
}

Trace integrate(const Params& p, const PhasePoint& start, double dt, long n_steps,
                Direction direction, const IntegrateOptions& opts) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
  if (n_steps < 1) throw DomainError("n_steps must be >= 1");
  const long stride = std::max(opts.record_stride, 1L);
  const double h = direction == Direction::forward ? dt : -dt;

  Trace t;
  t.source = TraceSource::flow;
  t.metadata.params = p;
  t.metadata.dt = dt;
  t.metadata.n_steps = n_steps;

  LiftPoint s{start.x, start.y};
  const double h0 = energy(p, start);
  const double budget = opts.drift_budget.value_or(default_drift_budget(h0, n_steps));
  t.metadata.energy_drift_budget = budget;
  t.points.reserve(static_cast<std::size_t>(n_steps / stride + 2));
  t.energies.reserve(t.points.capacity());
  t.points.push_back(s.project());
  t.energies.push_back(h0);

  double max_drift = 0.0;
  for (long i = 1; i <= n_steps; ++i) {
    s = rk4_step(p, s, h);
    const PhasePoint q = s.project();
    const double e = energy(p, q);
    max_drift = std::max(max_drift, std::abs(e - h0));
    if (!(max_drift <= budget))
      throw NumericalError("energy drift " + std::to_string(max_drift) + " exceeds budget " +
                           std::to_string(budget) + "; reduce dt");
    if (i % stride == 0 || i == n_steps) {
      t.points.push_back(q);
      t.energies.push_back(e);
    }
  }
  t.metadata.max_energy_drift = max_drift;
  return t;
}

std::string_view to_string(TerminalKind t) {
  switch (t) {
    case TerminalKind::returned_to_saddle: return "returned_to_saddle";
    case TerminalKind::reached_other_saddle: return "reached_other_saddle";
    case TerminalKind::left_window: return "left_window";
    case TerminalKind::step_budget: return "step_budget";
  }
  return "unknown";
}

std::string_view to_string(BranchKind b) {
  switch (b) {
    case BranchKind::unstable_plus: return "unstable+";
    case BranchKind::unstable_minus: return "unstable-";
    case BranchKind::stable_plus: return "stable+";
    case BranchKind::stable_minus: return "stable-";
  }
  return "unknown";
}

std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::separated: return "separated";
    case Topology::connected: return "connected";
    case Topology::ambiguous: return "ambiguous";
  }
  return "unknown";
}

Window default_window(const Params& p) {
  double lo = 0.0;
  double hi = 0.0;
  for (const auto& e : equilibria(p)) {
    lo = std::min(lo, e.position.y);
    hi = std::max(hi, e.position.y);
  }
  const double margin = 0.5 + 0.25 * (hi - lo);
  Window w;
  w.y_min = lo - margin;
  w.y_max = hi + margin;
  return w;
}

std::pair<std::array<double, 2>, std::array<double, 2>> saddle_eigenvectors(const Params& p,
                                                                             const Equilibrium& saddle) {
  const Matrix2 j = jacobian(p, saddle.position);
  const double lambda2 = j[0][1] * j[1][0];
  if (!(lambda2 > kDegeneracyTolerance) || saddle.stability != Stability::hyperbolic)
    throw NumericalError("eigenvectors requested at a non-hyperbolic equilibrium");
  const double lambda = std::sqrt(lambda2);
  // For [[0, f], [c, 0]] the eigenvector of +-lambda is (f, +-lambda).
  const double f = j[0][1];
  auto unit = [](double u, double v) {
    const double n = std::hypot(u, v);
    return std::array<double, 2>{u / n, v / n};
  };
  return {unit(f, lambda), unit(f, -lambda)};
}

namespace {

struct Target {
  EquilibriumLabel label;
  PhasePoint position;
};

SeparatrixBranch trace_branch(const Params& p, const Equilibrium& saddle, BranchKind kind,
                              const std::array<double, 2>& dir, double sign, double eps,
                              const std::vector<Target>& others, const Window& window,
                              const SeparatrixSettings& s) {
  SeparatrixBranch br;
  br.kind = kind;
  br.direction = dir;
  const bool unstable = kind == BranchKind::unstable_plus || kind == BranchKind::unstable_minus;
  const double h = unstable ? s.dt : -s.dt;
  const PhasePoint seed{normalize_angle(saddle.position.x + sign * eps * dir[0]),
                        saddle.position.y + sign * eps * dir[1]};
  br.seed = seed;
  for (const auto& o : others) br.min_distance.emplace_back(o.label, std::numeric_limits<double>::infinity());

  Trace& t = br.trace;
  t.source = TraceSource::separatrix;
  t.metadata.params = p;
  t.metadata.dt = s.dt;
  t.metadata.window = window;
  const double h0 = energy(p, seed);
  const double budget = default_drift_budget(h0, s.step_budget);
  t.metadata.energy_drift_budget = budget;
  t.points.push_back(seed);
  t.energies.push_back(h0);

  const long stride = std::max(s.record_stride, 1L);
  LiftPoint state{saddle.position.x + sign * eps * dir[0], seed.y};
  bool departed = false;
  double max_drift = 0.0;
  br.terminal.kind = TerminalKind::step_budget;
  long i = 1;
  for (; i <= s.step_budget; ++i) {
    state = rk4_step(p, state, h);
    const PhasePoint q = state.project();
    const double e = energy(p, q);
    max_drift = std::max(max_drift, std::abs(e - h0));
    if (!(max_drift <= budget))
      throw NumericalError("separatrix energy drift exceeds budget; reduce dt");

    bool stop = false;
    for (std::size_t j = 0; j < others.size(); ++j) {
      const double d = cylinder_distance(q, others[j].position);
      br.min_distance[j].second = std::min(br.min_distance[j].second, d);
      if (!stop && d < s.arrival_radius) {
        br.terminal = {TerminalKind::reached_other_saddle, others[j].label};
        stop = true;
      }
    }
    const double d_self = cylinder_distance(q, saddle.position);
    if (d_self > 2.0 * s.arrival_radius) departed = true;
    if (!stop && departed && d_self < s.arrival_radius) {
      br.terminal = {TerminalKind::returned_to_saddle, std::nullopt};
      stop = true;
    }
    if (!stop && !window.contains_y(q.y)) {
      br.terminal = {TerminalKind::left_window, std::nullopt};
      stop = true;
    }
    if (stop || i % stride == 0 || i == s.step_budget) {
      t.points.push_back(q);
      t.energies.push_back(e);
    }
    if (stop) break;
  }
  br.steps = std::min(i, s.step_budget);
  t.metadata.n_steps = br.steps;
  t.metadata.max_energy_drift = max_drift;
  return br;
}

}  // namespace

SeparatrixBundle separatrices(const Params& p, const Equilibrium& saddle, const SeparatrixSettings& settings) {
  if (saddle.stability != Stability::hyperbolic)
    throw DomainError("separatrices need a hyperbolic equilibrium");
  if (!(settings.dt > 0.0) || settings.step_budget < 1)
    throw DomainError("separatrix dt and step budget must be positive");
  const auto [unstable, stable] = saddle_eigenvectors(p, saddle);
  const Window window = settings.window.value_or(default_window(p));

  std::vector<Target> others;
  for (const auto& e : equilibria(p)) {
    if (e.stability != Stability::hyperbolic || e.label == saddle.label) continue;
    if (!window.contains_y(e.position.y)) continue;
    others.push_back({e.label, e.position});
  }

  SeparatrixBundle bundle;
  bundle.saddle = saddle;
  bundle.eps = settings.eps > 0.0 ? settings.eps : 1e-6 * (1.0 + std::abs(saddle.position.y));
  bundle.branches = {
      trace_branch(p, saddle, BranchKind::unstable_plus, unstable, +1.0, bundle.eps, others, window, settings),
      trace_branch(p, saddle, BranchKind::unstable_minus, unstable, -1.0, bundle.eps, others, window, settings),
      trace_branch(p, saddle, BranchKind::stable_plus, stable, +1.0, bundle.eps, others, window, settings),
      trace_branch(p, saddle, BranchKind::stable_minus, stable, -1.0, bundle.eps, others, window, settings),
  };
  return bundle;
}

TopologyResult chain_topology(const Params& p, ChainPair pair, const TopologySettings& settings) {
  const auto eqs = equilibria(p);
  const auto roots = chain_roots(p);
  if (!roots || eqs.size() != 6) throw DomainError("chain_topology needs a^2 - 4b > 0");
  const Chain first = pair == ChainPair::I_II ? Chain::I : Chain::II;
  const Chain second = pair == ChainPair::I_II ? Chain::II : Chain::III;
  const auto sa = chain_saddle(eqs, first);
  const auto sb = chain_saddle(eqs, second);
  if (!sa || !sb) throw DomainError("a chain has no hyperbolic equilibrium");

  SeparatrixSettings sep = settings.separatrix;
  if (!sep.window) {
    Window w = default_window(p);
    sep.window = w;
  }
  const SeparatrixBundle ba = separatrices(p, *sa, sep);
  const SeparatrixBundle bb = separatrices(p, *sb, sep);

  TopologyResult r;
  r.saddle_a = sa->label;
  r.saddle_b = sb->label;
  r.min_distance = std::numeric_limits<double>::infinity();
  bool connected = false;
  bool all_terminated = true;
  auto scan = [&](const SeparatrixBundle& b, EquilibriumLabel partner) {
    for (const auto& br : b.branches) {
      for (const auto& [label, d] : br.min_distance)
        if (label == partner) r.min_distance = std::min(r.min_distance, d);
      const bool unstable = br.kind == BranchKind::unstable_plus || br.kind == BranchKind::unstable_minus;
      if (unstable && br.terminal.kind == TerminalKind::reached_other_saddle && br.terminal.other == partner)
        connected = true;
      if (br.terminal.kind == TerminalKind::step_budget) all_terminated = false;
    }
  };
  scan(ba, sb->label);
  scan(bb, sa->label);

  if (connected) r.verdict = Topology::connected;
  else if (all_terminated && r.min_distance >= settings.separation_floor) r.verdict = Topology::separated;
  else r.verdict = Topology::ambiguous;
  return r;
}

std::vector<PhasePoint> default_seeds(const Window& w, int per_line) {
  std::vector<PhasePoint> seeds;
  if (per_line < 1) return seeds;
  for (double x : {0.0, kPi}) {
    if (x < w.x_min || x > w.x_max) continue;
    for (int j = 0; j < per_line; ++j) {
      const double y = w.y_min + (j + 0.5) * w.height() / per_line;
      seeds.push_back({x, y});
    }
  }
  return seeds;
}

Portrait portrait(const Params& p, const Window& w, const std::vector<PhasePoint>& seeds,
                  const PortraitSettings& settings) {
  w.validate();
  Portrait out;
  IntegrateOptions io;
  io.record_stride = settings.record_stride;
  const long back_steps = std::max(settings.n_steps / 2, 1L);
  const long fwd_steps = std::max(settings.n_steps - settings.n_steps / 2, 1L);

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    try {
      Trace back = integrate(p, seeds[i], settings.dt, back_steps, Direction::backward, io);
      Trace fwd = integrate(p, seeds[i], settings.dt, fwd_steps, Direction::forward, io);
      Trace t;
      t.source = TraceSource::flow;
      t.metadata = fwd.metadata;
      t.metadata.n_steps = back_steps + fwd_steps;
      t.metadata.window = w;
      t.metadata.energy_drift_budget =
          std::max(*back.metadata.energy_drift_budget, *fwd.metadata.energy_drift_budget);
      t.metadata.max_energy_drift =
          std::max(*back.metadata.max_energy_drift, *fwd.metadata.max_energy_drift);
      t.points.assign(back.points.rbegin(), back.points.rend());
      t.energies.assign(back.energies.rbegin(), back.energies.rend());
      t.points.insert(t.points.end(), fwd.points.begin() + 1, fwd.points.end());
      t.energies.insert(t.energies.end(), fwd.energies.begin() + 1, fwd.energies.end());
      out.traces.push_back(std::move(t));
    } catch (const NumericalError& e) {
      out.failures.push_back({i, std::nullopt, e.what()});
    }
  }
  out.seed_traces = out.traces.size();

  if (!settings.include_separatrices) return out;
  std::vector<Equilibrium> eqs;
  try {
    eqs = equilibria(p);
  } catch (const DomainError&) {
    return out;  // b = 0: no symmetric saddle set to trace
  }
  SeparatrixSettings sep = settings.separatrix;
  if (!sep.window) sep.window = w;
  for (const auto& e : eqs) {
    if (e.stability != Stability::hyperbolic || !w.contains_y(e.position.y)) continue;
    try {
      SeparatrixBundle bundle = separatrices(p, e, sep);
      for (auto& br : bundle.branches) out.traces.push_back(std::move(br.trace));
    } catch (const NumericalError& ex) {
      out.failures.push_back({std::nullopt, e.label, ex.what()});
    }
  }
  return out;
}

}  // namespace nontwist
