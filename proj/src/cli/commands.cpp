#include "nontwist/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "nontwist/cli/svg.hpp"
#include "nontwist/nontwist.hpp"

#ifndef NONTWIST_VERSION
#define NONTWIST_VERSION "dev"
#endif

namespace nontwist::cli {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

fs::path out_dir(const RunConfig& cfg) {
  return cfg.has("out") ? fs::path(cfg.path("out")) : fs::path(".");
}

Params params_of(const RunConfig& cfg, double b) {
  return Params(cfg.number("a"), b, cfg.number("k"));
}

Json root_json(const Root& r) {
  Json j;
  j["b"] = r.b;
  j["residual"] = r.residual;
  j["bracket"] = {r.bracket_lo, r.bracket_hi};
  j["iterations"] = r.iterations;
  return j;
}

Json report_json(const ThresholdReport& r) {
  Json j;
  j["kind"] = std::string(to_string(r.kind));
  j["a"] = r.a;
  if (r.k) j["k"] = *r.k;
  if (r.k_triple) j["k_triple"] = *r.k_triple;
  j["range"] = {r.range.first, r.range.second};
  Json roots = Json::array();
  for (const auto& root : r.roots) roots.push_back(root_json(root));
  j["roots"] = std::move(roots);
  return j;
}

Json triple_json(double a) {
  const auto [lo, hi] = default_triple_range(a);
  const TriplePoint t = triple_point(a, lo, hi);
  Json j;
  j["b"] = t.b;
  j["k"] = t.k;
  j["residual_triple"] = t.root.residual;
  j["residual_I_II"] = t.residual_I_II;
  j["bracket"] = {t.root.bracket_lo, t.root.bracket_hi};
  j["iterations"] = t.root.iterations;
  j["range"] = {lo, hi};
  return j;
}

std::vector<PhasePoint> read_seeds(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("seeds", "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  std::vector<PhasePoint> seeds;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '[') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError("seeds", std::string("invalid JSON: ") + e.what());
    }
    for (const auto& s : j) {
      if (!s.is_array() || s.size() != 2) throw ConfigError("seeds", "expected [[x, y], ...]");
      seeds.push_back({normalize_angle(s[0].get<double>()), s[1].get<double>()});
    }
    return seeds;
  }
  Dataset d;
  try {
    d = parse_csv(text);
  } catch (const std::runtime_error& e) {
    throw ConfigError("seeds", e.what());
  }
  const auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < d.columns.size(); ++i)
      if (d.columns[i] == name) return i;
    throw ConfigError("seeds", "CSV needs columns x and y");
  };
  const std::size_t cx = col("x");
  const std::size_t cy = col("y");
  for (const auto& row : d.rows) {
    const double* x = std::get_if<double>(&row[cx]);
    const double* y = std::get_if<double>(&row[cy]);
    if (!x || !y) throw ConfigError("seeds", "non-numeric seed coordinate");
    seeds.push_back({normalize_angle(*x), *y});
  }
  return seeds;
}

Json equilibrium_json(const Params& p, const Equilibrium& e) {
  Json j;
  j["label"] = std::string(to_string(e.label));
  j["chain"] = std::string(to_string(e.chain));
  j["x"] = e.position.x;
  j["y"] = e.position.y;
  j["stability"] = std::string(to_string(e.stability));
  j["eigenvalue_squared"] = e.eigenvalue_squared;
  j["H"] = energy(p, e.position);
  return j;
}

std::vector<double> sample_grid(Range r, long n) {
  std::vector<double> out;
  if (n == 1) {
    out.push_back(r.lo);
    return out;
  }
  for (long i = 0; i < n; ++i)
    out.push_back(i == n - 1 ? r.hi : r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1));
  return out;
}

long positive_integer(const RunConfig& cfg, std::string_view field, long fallback) {
  const long v = cfg.has(field) ? cfg.integer(field) : fallback;
  if (v < 1) throw ConfigError(std::string(field), "must be >= 1");
  return v;
}

// Value-taking flags of each subcommand; --config is shared.
const std::map<std::string, std::vector<std::string>>& command_fields() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"thresholds", {"a", "k", "b-range", "out"}},
      {"portrait", {"a", "b", "k", "window", "res", "dt", "steps", "seeds", "svg", "out"}},
      {"scan", {"a", "k", "b-range", "samples", "out"}},
      {"rotation", {"a", "b", "y-range", "samples", "out"}},
  };
  return m;
}

const std::map<std::string, std::vector<std::string>>& command_flags() {
  static const std::map<std::string, std::vector<std::string>> m{
      {"thresholds", {"triple"}},
      {"portrait", {}},
      {"scan", {"topology"}},
      {"rotation", {}},
  };
  return m;
}

// "--b -4" would be read as an option by most parsers; glue values that
// look like negative numbers onto their flag.
std::vector<std::string> glue_negative_values(const std::vector<std::string>& args) {
  std::set<std::string> value_flags{"--config"};
  for (const auto& [_, fields] : command_fields())
    for (const auto& f : fields) value_flags.insert("--" + f);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (value_flags.count(args[i]) && i + 1 < args.size() && args[i + 1].size() > 1 &&
        args[i + 1][0] == '-' && (std::isdigit(static_cast<unsigned char>(args[i + 1][1])) || args[i + 1][1] == '.')) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const std::string& cmd = cfg.command();
  if (cmd == "thresholds") {
    const Json doc = thresholds_document(cfg);
    if (cfg.has("out")) write_file(out_dir(cfg) / "thresholds.json", doc.dump(2) + "\n");
    else out << doc.dump(2) << "\n";
    return kExitOk;
  }
  if (cmd == "portrait") {
    PortraitOutput po = portrait_output(cfg);
    const fs::path dir = out_dir(cfg);
    write_file(dir / "portrait.csv", to_csv(po.traces));
    write_file(dir / "portrait.provenance.json", po.traces.provenance.dump(2) + "\n");
    write_file(dir / "equilibria.json", po.equilibria.dump(2) + "\n");
    if (cfg.has("svg")) write_file(cfg.path("svg"), po.svg);
    if (po.seed_count > 0 && po.failed_seeds == po.seed_count) {
      err << "portrait: energy drift budget exceeded on every seed; reduce --dt\n";
      return kExitNumericalFailure;
    }
    if (po.failed_seeds > 0) err << "portrait: " << po.failed_seeds << " seed(s) failed, see provenance\n";
    return kExitOk;
  }
  if (cmd == "scan") {
    const Dataset d = scan_dataset(cfg);
    const fs::path dir = out_dir(cfg);
    write_file(dir / "scan.csv", to_csv(d));
    write_file(dir / "scan.provenance.json", d.provenance.dump(2) + "\n");
    return kExitOk;
  }
  if (cmd == "rotation") {
    const RotationOutput ro = rotation_output(cfg);
    const fs::path dir = out_dir(cfg);
    write_file(dir / "rotation.csv", to_csv(ro.profile));
    write_file(dir / "rotation.json", ro.summary.dump(2) + "\n");
    return kExitOk;
  }
  throw ConfigError("command", "unknown command '" + cmd + "'");
}

}  // namespace

Json provenance(const RunConfig& cfg) {
  Json j;
  j["tool"] = "nontwist";
  j["tool_version"] = NONTWIST_VERSION;
  j["command"] = cfg.command();
  j["config"] = cfg.values();
  j["timestamp"] = utc_timestamp();
  return j;
}

Json thresholds_document(const RunConfig& cfg) {
  const double a = cfg.number("a");
  if (!(a > 0.0)) throw DomainError("a must be > 0");
  Json doc;
  doc["schema"] = "nontwist.thresholds/1";
  doc["a"] = a;
  if (!cfg.flag("triple")) {
    const double k = cfg.number("k");
    if (!(k >= 0.0)) throw DomainError("k must be >= 0");
    const Range r = cfg.range("b-range");
    if (!(r.lo < r.hi)) throw ConfigError("b-range", "lo must be < hi");
    doc["k"] = k;
    doc["b_range"] = {r.lo, r.hi};
    doc["I_II"] = report_json(thresholds(ThresholdKind::I_II, a, k, r.lo, r.hi));
    doc["II_III"] = report_json(thresholds(ThresholdKind::II_III, a, k, r.lo, r.hi));
  }
  doc["triple"] = triple_json(a);
  doc["provenance"] = provenance(cfg);
  return doc;
}

PortraitOutput portrait_output(const RunConfig& cfg) {
  const Params p = params_of(cfg, cfg.number("b"));
  const std::vector<Equilibrium> eqs = equilibria(p);

  Window w = cfg.window("window").value_or(default_window(p));
  const auto res = cfg.resolution("res").value_or(std::pair{400, 300});
  w.nx = res.first;
  w.ny = res.second;

  PortraitSettings settings;
  if (cfg.has("dt")) settings.dt = cfg.number("dt");
  if (!(settings.dt > 0.0)) throw ConfigError("dt", "must be > 0");
  settings.n_steps = positive_integer(cfg, "steps", settings.n_steps);
  const std::vector<PhasePoint> seeds = cfg.has("seeds") ? read_seeds(cfg.path("seeds")) : default_seeds(w);

  Portrait pr = portrait(p, w, seeds, settings);
  std::vector<Trace> traces = std::move(pr.traces);
  std::set<double> levels;
  for (const auto& e : eqs)
    if (e.stability == Stability::hyperbolic && w.contains_y(e.position.y)) levels.insert(energy(p, e.position));
  for (double h : levels)
    for (auto& t : level_curves(p, h, w)) traces.push_back(std::move(t));

  PortraitOutput po;
  po.seed_count = seeds.size();
  Json failures = Json::array();
  for (const auto& f : pr.failures) {
    Json jf;
    if (f.seed_index) {
      jf["seed_index"] = *f.seed_index;
      ++po.failed_seeds;
    }
    if (f.saddle) jf["saddle"] = std::string(to_string(*f.saddle));
    jf["message"] = f.message;
    failures.push_back(std::move(jf));
  }

  Dataset& d = po.traces;
  d.schema = "nontwist.portrait/1";
  d.columns = {"trace_id", "source", "x", "y", "H"};
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const Trace& t = traces[i];
    const std::string src(to_string(t.source));
    for (std::size_t k = 0; k < t.points.size(); ++k)
      d.rows.push_back({static_cast<double>(i), src, t.points[k].x, t.points[k].y, t.energies[k]});
  }
  d.provenance = provenance(cfg);
  d.provenance["failures"] = std::move(failures);
  d.provenance["trace_count"] = traces.size();

  Json ej;
  ej["schema"] = "nontwist.equilibria/1";
  ej["params"] = {{"a", p.a()}, {"b", p.b()}, {"k", p.k()}};
  Json list = Json::array();
  for (const auto& e : eqs) list.push_back(equilibrium_json(p, e));
  ej["equilibria"] = std::move(list);
  po.equilibria = std::move(ej);

  if (cfg.has("svg")) {
    std::ostringstream title;
    title << "a=" << format_number(p.a()) << " b=" << format_number(p.b()) << " k=" << format_number(p.k());
    po.svg = render_svg(w, traces, eqs, title.str());
  }
  return po;
}

Dataset scan_dataset(const RunConfig& cfg) {
  const double a = cfg.number("a");
  const double k = cfg.number("k");
  Params(a, 1.0, k);  // validates a and k
  const Range r = cfg.range("b-range");
  const long n = positive_integer(cfg, "samples", 101);
  if (!(r.lo < r.hi) && !(n == 1 && r.lo == r.hi)) throw ConfigError("b-range", "lo must be < hi");
  const bool topology = cfg.flag("topology");

  Dataset d;
  d.schema = "nontwist.scan/1";
  d.columns = {"b", "equilibrium_count", "residual_I_II", "residual_II_III", "regime_I_II", "regime_II_III"};
  if (topology) d.columns.push_back("chain_topology_II_III");
  const std::string undefined = "undefined";
  const std::string absent(to_string(Regime::chains_absent));

  for (double b : sample_grid(r, n)) {
    std::vector<Cell> row{b};
    if (b == 0.0) {
      row.insert(row.end(), {undefined, undefined, undefined, undefined, undefined});
      if (topology) row.emplace_back(undefined);
      d.rows.push_back(std::move(row));
      continue;
    }
    const Params p(a, b, k);
    row.emplace_back(static_cast<double>(equilibria(p).size()));
    if (a * a - 4.0 * b < 0.0) {
      row.insert(row.end(), {absent, absent, absent, absent});
      if (topology) row.emplace_back(absent);
      d.rows.push_back(std::move(row));
      continue;
    }
    row.emplace_back(residual_I_II(a, b, k));
    row.emplace_back(residual_II_III(a, b, k));
    const auto [first, second] = regime(a, k, b);
    row.emplace_back(std::string(to_string(first.regime)));
    row.emplace_back(std::string(to_string(second.regime)));
    if (topology) {
      try {
        row.emplace_back(std::string(to_string(chain_topology(p, ChainPair::II_III).verdict)));
      } catch (const DomainError&) {
        row.emplace_back(absent);
      }
    }
    d.rows.push_back(std::move(row));
  }
  d.provenance = provenance(cfg);
  return d;
}

RotationOutput rotation_output(const RunConfig& cfg) {
  const Params p(cfg.number("a"), cfg.number("b"), 0.0);
  const Range r = cfg.has("y-range") ? cfg.range("y-range") : Range{-1.0, 2.0};
  if (!(r.lo < r.hi)) throw ConfigError("y-range", "lo must be < hi");
  const long n = positive_integer(cfg, "samples", 301);

  RotationOutput ro;
  ro.profile.schema = "nontwist.rotation/1";
  ro.profile.columns = {"y", "F", "rho", "dF"};
  for (double y : sample_grid(r, n)) {
    const double f = rotation_profile(p, y);
    ro.profile.rows.push_back({y, f, f / kTwoPi, twist_derivative(p, y)});
  }
  ro.profile.provenance = provenance(cfg);

  Json s;
  s["schema"] = "nontwist.rotation-summary/1";
  s["params"] = {{"a", p.a()}, {"b", p.b()}};
  s["nontwist"] = p.nontwist();
  if (p.b() == 0.0) {
    s["twistless"] = nullptr;
    s["note"] = "b = 0: F is quadratic with a single extremum; no pair of twistless circles";
  } else if (!p.nontwist()) {
    s["twistless"] = nullptr;
    s["note"] = "a^2 - 3b < 0: F' > 0 everywhere, the map satisfies the twist condition";
  } else {
    const TwistlessCircles c = twistless_circles(p);
    const auto [rho1, rho2] = extremal_rotation_numbers(p);
    s["twistless"] = {{"y_C1", c.y_c1},     {"y_C2", c.y_c2},         {"rho_C1", c.rho_c1},
                      {"rho_C2", c.rho_c2}, {"closed_form_rho_C1", rho1}, {"closed_form_rho_C2", rho2}};
  }
  s["provenance"] = ro.profile.provenance;
  ro.summary = std::move(s);
  return ro;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cubic nontwist map: reconnection thresholds, phase portraits and scans", "nontwist"};
  app.require_subcommand(1);
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::string> config_paths;
  std::map<std::string, CLI::App*> subs;

  const std::map<std::string, std::string> help{
      {"thresholds", "Reconnection thresholds in b and the triple point"},
      {"portrait", "Phase-portrait dataset (CSV, equilibria JSON, optional SVG)"},
      {"scan", "Regime scan along a b-range"},
      {"rotation", "Rotation-number profile and twistless circles"},
  };
  for (const auto& [cmd, fields] : command_fields()) {
    CLI::App* sub = app.add_subcommand(cmd, help.at(cmd));
    subs[cmd] = sub;
    for (const auto& f : fields) sub->add_option("--" + f, values[cmd][f]);
    for (const auto& f : command_flags().at(cmd)) sub->add_flag("--" + f, flags[cmd][f]);
    sub->add_option("--config", config_paths[cmd], "Flat key-value JSON config");
  }

  const std::vector<std::string> glued = glue_negative_values(raw_args);
  std::vector<std::string> reversed(glued.rbegin(), glued.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "nontwist: " << e.what() << "\n";
    return kExitConfigError;
  }

  std::string cmd;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) cmd = name;

  try {
    Json flag_layer = Json::object();
    for (const auto& f : command_fields().at(cmd))
      if (subs[cmd]->count("--" + f) > 0) flag_layer[f] = values[cmd][f];
    for (const auto& f : command_flags().at(cmd))
      if (subs[cmd]->count("--" + f) > 0) flag_layer[f] = flags[cmd][f];
    Json file_layer = Json::object();
    if (subs[cmd]->count("--config") > 0) file_layer = load_config_file(config_paths[cmd]);
    const RunConfig cfg(cmd, merge_config(default_config(), file_layer, flag_layer));
    return execute(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "nontwist " << cmd << ": invalid setting " << e.what() << "\n";
    return kExitConfigError;
  } catch (const DomainError& e) {
    err << "nontwist " << cmd << ": domain error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const NumericalError& e) {
    err << "nontwist " << cmd << ": numerical failure: " << e.what() << "\n";
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "nontwist " << cmd << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace nontwist::cli
