#include <sstream>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nontwist/cli/commands.hpp"
#include "nontwist/nontwist.hpp"

namespace py = pybind11;
using namespace nontwist;

namespace {

py::dict trace_dict(const Trace& t) {
  const auto n = static_cast<py::ssize_t>(t.points.size());
  const std::vector<py::ssize_t> shape{n};
  py::array_t<double> x(shape), y(shape), h(shape);
  auto xs = x.mutable_unchecked<1>();
  auto ys = y.mutable_unchecked<1>();
  auto hs = h.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < n; ++i) {
    xs(i) = t.points[i].x;
    ys(i) = t.points[i].y;
    hs(i) = t.energies[i];
  }
  py::dict d;
  d["x"] = x;
  d["y"] = y;
  d["H"] = h;
  d["source"] = std::string(to_string(t.source));
  if (t.metadata.max_energy_drift) d["max_energy_drift"] = *t.metadata.max_energy_drift;
  if (t.metadata.level) d["level"] = *t.metadata.level;
  return d;
}

Trace trace_from(const Params& p, py::array_t<double> x, py::array_t<double> y, TraceSource src) {
  auto xs = x.unchecked<1>();
  auto ys = y.unchecked<1>();
  if (xs.shape(0) != ys.shape(0)) throw std::invalid_argument("x and y differ in length");
  Trace t;
  t.source = src;
  t.metadata.params = p;
  for (py::ssize_t i = 0; i < xs.shape(0); ++i) {
    t.points.push_back({xs(i), ys(i)});
    t.energies.push_back(energy(p, t.points.back()));
  }
  return t;
}

py::dict root_dict(const Root& r) {
  py::dict d;
  d["b"] = r.b;
  d["residual"] = r.residual;
  d["bracket"] = py::make_tuple(r.bracket_lo, r.bracket_hi);
  d["iterations"] = r.iterations;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cubic nontwist map core";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<Params>(m, "Params")
      .def(py::init<double, double, double>(), py::arg("a"), py::arg("b"), py::arg("k") = 0.0)
      .def_property_readonly("a", &Params::a)
      .def_property_readonly("b", &Params::b)
      .def_property_readonly("k", &Params::k)
      .def("nontwist", &Params::nontwist)
      .def("__repr__", [](const Params& p) {
        std::ostringstream s;
        s << "Params(a=" << p.a() << ", b=" << p.b() << ", k=" << p.k() << ")";
        return s.str();
      });

  m.def("rotation_profile", &rotation_profile, py::arg("p"), py::arg("y"));
  m.def("twist_derivative", &twist_derivative, py::arg("p"), py::arg("y"));
  m.def(
      "step",
      [](const Params& p, double x, double y) {
        const PhasePoint q = step(p, {x, y});
        return py::make_tuple(q.x, q.y);
      },
      py::arg("p"), py::arg("x"), py::arg("y"));
  m.def(
      "orbit", [](const Params& p, double x, double y, long n) { return trace_dict(orbit(p, {x, y}, n)); },
      py::arg("p"), py::arg("x"), py::arg("y"), py::arg("n"));
  m.def(
      "rotation_number",
      [](const Params& p, double x, double y, long n) { return rotation_number_numeric(p, {x, y}, n); },
      py::arg("p"), py::arg("x"), py::arg("y"), py::arg("n"));
  m.def("twistless_circles", [](const Params& p) {
    const TwistlessCircles c = twistless_circles(p);
    py::dict d;
    d["y_C1"] = c.y_c1;
    d["y_C2"] = c.y_c2;
    d["rho_C1"] = c.rho_c1;
    d["rho_C2"] = c.rho_c2;
    return d;
  });
  m.def("extremal_rotation_numbers", &extremal_rotation_numbers);

  m.def(
      "energy", [](const Params& p, double x, double y) { return energy(p, {x, y}); }, py::arg("p"),
      py::arg("x"), py::arg("y"));
  m.def(
      "vector_field",
      [](const Params& p, double x, double y) {
        const Velocity v = vector_field(p, x, y);
        return py::make_tuple(v.dx_dt, v.dy_dt);
      },
      py::arg("p"), py::arg("x"), py::arg("y"));
  m.def("equilibria", [](const Params& p) {
    py::list out;
    for (const auto& e : equilibria(p)) {
      py::dict d;
      d["label"] = std::string(to_string(e.label));
      d["chain"] = std::string(to_string(e.chain));
      d["x"] = e.position.x;
      d["y"] = e.position.y;
      d["stability"] = std::string(to_string(e.stability));
      d["eigenvalue_squared"] = e.eigenvalue_squared;
      out.append(d);
    }
    return out;
  });

  m.def("residual_I_II", &residual_I_II, py::arg("a"), py::arg("b"), py::arg("k"));
  m.def("residual_II_III", &residual_II_III, py::arg("a"), py::arg("b"), py::arg("k"));
  m.def("k_of_b_II_III", &k_of_b_II_III, py::arg("a"), py::arg("b"));
  m.def("triple_residual", &triple_residual, py::arg("a"), py::arg("b"));
  m.def(
      "thresholds",
      [](const std::string& kind, double a, double k, double b_lo, double b_hi) {
        ThresholdKind tk;
        if (kind == "I_II") tk = ThresholdKind::I_II;
        else if (kind == "II_III") tk = ThresholdKind::II_III;
        else throw std::invalid_argument("kind must be 'I_II' or 'II_III'");
        py::list out;
        for (const auto& r : thresholds(tk, a, k, b_lo, b_hi).roots) out.append(root_dict(r));
        return out;
      },
      py::arg("kind"), py::arg("a"), py::arg("k"), py::arg("b_lo"), py::arg("b_hi"));
  m.def(
      "triple_point",
      [](double a) {
        const TriplePoint t = triple_point(a);
        py::dict d;
        d["b"] = t.b;
        d["k"] = t.k;
        d["residual_I_II"] = t.residual_I_II;
        return d;
      },
      py::arg("a"));
  m.def(
      "regime",
      [](double a, double k, double b) {
        const auto [first, second] = regime(a, k, b);
        py::dict d;
        d["I_II"] = std::string(to_string(first.regime));
        d["II_III"] = std::string(to_string(second.regime));
        return d;
      },
      py::arg("a"), py::arg("k"), py::arg("b"));

  m.def(
      "integrate",
      [](const Params& p, double x, double y, double dt, long n_steps) {
        return trace_dict(integrate(p, {x, y}, dt, n_steps));
      },
      py::arg("p"), py::arg("x"), py::arg("y"), py::arg("dt"), py::arg("n_steps"));
  m.def(
      "chain_topology",
      [](const Params& p, const std::string& pair) {
        ChainPair cp;
        if (pair == "I_II") cp = ChainPair::I_II;
        else if (pair == "II_III") cp = ChainPair::II_III;
        else throw std::invalid_argument("pair must be 'I_II' or 'II_III'");
        const TopologyResult r = chain_topology(p, cp);
        py::dict d;
        d["verdict"] = std::string(to_string(r.verdict));
        d["min_distance"] = r.min_distance;
        return d;
      },
      py::arg("p"), py::arg("pair"));
  m.def(
      "level_curves",
      [](const Params& p, double level, double y_min, double y_max, int nx, int ny) {
        Window w;
        w.y_min = y_min;
        w.y_max = y_max;
        w.nx = nx;
        w.ny = ny;
        py::list out;
        for (const auto& t : level_curves(p, level, w)) out.append(trace_dict(t));
        return out;
      },
      py::arg("p"), py::arg("level"), py::arg("y_min"), py::arg("y_max"), py::arg("nx") = 400,
      py::arg("ny") = 300);
  m.def(
      "is_meander",
      [](const Params& p, py::array_t<double> x, py::array_t<double> y) {
        return is_meander(trace_from(p, x, y, TraceSource::contour));
      },
      py::arg("p"), py::arg("x"), py::arg("y"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
