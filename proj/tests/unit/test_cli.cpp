#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nontwist/cli/commands.hpp"
#include "nontwist/cli/config.hpp"
#include "nontwist/cli/dataset.hpp"
#include "nontwist/nontwist.hpp"

using namespace nontwist;
using namespace nontwist::cli;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("nontwist_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t column(const Dataset& d, const std::string& name) {
  for (std::size_t i = 0; i < d.columns.size(); ++i)
    if (d.columns[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

}  // namespace

TEST_CASE("number formatting is shortest round-trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(-3.0) == "-3");
  CHECK(format_number(1e-20) == "1e-20");
  CHECK_THROWS(format_number(NAN));
  CHECK_THROWS(format_number(INFINITY));
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("dataset round trips through CSV and JSON") {
  Dataset d;
  d.schema = "nontwist.test/1";
  d.columns = {"b", "label", "value"};
  d.rows = {{-1.9538014117147768, std::string("dimerised_pair"), 0.1 + 0.2},
            {0.5, std::string("text, with \"quotes\""), -0.0},
            {1e-300, std::string("12abc"), 6.0}};
  d.provenance = {{"tool", "nontwist"}, {"config", {{"a", 1.5}}}};
  const Dataset from_csv = parse_csv(to_csv(d));
  CHECK(from_csv.columns == d.columns);
  CHECK(from_csv.rows == d.rows);
  const std::string csv = to_csv(d);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(csv.substr(0, csv.find('\n')) == "b,label,value");
  CHECK(dataset_from_json(to_json(d)) == d);
  CHECK(dataset_from_json(Json::parse(to_json(d).dump())) == d);
}

TEST_CASE("config parsing names the offending field") {
  CHECK(parse_range("-3:1", "b-range").lo == -3.0);
  CHECK(parse_range("-3:1", "b-range").hi == 1.0);
  try {
    parse_range("-3", "b-range");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "b-range");
  }
  const Window w = parse_window("0:6.283185307179586:-1:2", "window");
  CHECK(w.y_min == -1.0);
  CHECK(w.x_max == kTwoPi);
  CHECK_THROWS_AS(parse_window("0:7:-1:2", "window"), ConfigError);
  CHECK_THROWS_AS(parse_window("0:1:2:1", "window"), ConfigError);
  CHECK(parse_resolution("40:30", "res") == std::pair{40, 30});
  CHECK_THROWS_AS(parse_resolution("1:30", "res"), ConfigError);
  CHECK_THROWS_AS(parse_resolution("4.5:30", "res"), ConfigError);
}

TEST_CASE("config layering: flags over file over defaults") {
  const Json merged = merge_config(default_config(), Json{{"a", 2.0}, {"k", 0.05}}, Json{{"k", "0.01"}});
  const RunConfig cfg("scan", merged);
  CHECK(cfg.number("a") == 2.0);
  CHECK(cfg.number("k") == 0.01);
  CHECK(RunConfig("scan", merge_config(default_config(), Json::object(), Json::object())).number("a") == 1.5);
  CHECK(RunConfig("scan", default_config()).number("k") == 0.018);
  try {
    merge_config(default_config(), Json{{"bogus", 1}}, Json::object());
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "bogus");
  }
  try {
    RunConfig("portrait", default_config()).number("b");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "b");
  }
}

TEST_CASE("thresholds command") {
  const Run r = run_cli({"thresholds", "--a", "1.5", "--k", "0.018", "--b-range", "-3:1"});
  REQUIRE(r.code == 0);
  const Json doc = Json::parse(r.out);
  CHECK(doc["schema"] == "nontwist.thresholds/1");
  REQUIRE(doc["I_II"]["roots"].size() == 1);
  REQUIRE(doc["II_III"]["roots"].size() == 1);
  CHECK(std::abs(doc["I_II"]["roots"][0]["b"].get<double>() + 1.9538) <= 1e-3);
  CHECK(std::abs(doc["II_III"]["roots"][0]["b"].get<double>() - 0.53168) <= 1e-4);
  CHECK(std::abs(doc["triple"]["b"].get<double>() - 0.5) <= 1e-9);
  CHECK(doc["provenance"]["config"]["b-range"] == "-3:1");

  const Run empty = run_cli({"thresholds", "--a", "1.5", "--k", "0.018", "--b-range", "0.6:0.7"});
  CHECK(empty.code == 0);
  const Json e = Json::parse(empty.out);
  CHECK(e["I_II"]["roots"].empty());
  CHECK(e["II_III"]["roots"].empty());

  const Run triple = run_cli({"thresholds", "--a", "1.5", "--triple"});
  REQUIRE(triple.code == 0);
  const Json t = Json::parse(triple.out);
  CHECK(std::abs(t["triple"]["b"].get<double>() - 0.5) <= 1e-9);
  CHECK(std::abs(t["triple"]["k"].get<double>() - 0.0625) <= 1e-9);
  CHECK_FALSE(t.contains("I_II"));

  TempDir dir;
  CHECK(run_cli({"thresholds", "--b-range", "-3:1", "--out", dir.path.string()}).code == 0);
  CHECK(Json::parse(slurp(dir / "thresholds.json"))["I_II"]["roots"].size() == 1);
}

TEST_CASE("exit-code contract") {
  const Run missing = run_cli({"thresholds", "--a", "1.5"});
  CHECK(missing.code == kExitConfigError);
  CHECK(missing.err.find("b-range") != std::string::npos);
  CHECK(std::count(missing.err.begin(), missing.err.end(), '\n') == 1);

  const Run bad = run_cli({"scan", "--b-range", "0.3:x"});
  CHECK(bad.code == kExitConfigError);
  CHECK(bad.err.find("b-range") != std::string::npos);

  CHECK(run_cli({"portrait", "--b", "0.5", "--steps", "-3"}).code == kExitConfigError);
  CHECK(run_cli({"frobnicate"}).code == kExitConfigError);
  CHECK(run_cli({"scan", "--b-range", "0:1", "--unknown", "1"}).code == kExitConfigError);
  CHECK(run_cli({"thresholds", "--a", "-1", "--b-range", "0:1"}).code == kExitDomainError);

  TempDir dir;
  CHECK(run_cli({"portrait", "--b", "0", "--out", dir.path.string()}).code == kExitDomainError);
  CHECK(run_cli({"portrait", "--b", "0.5", "--k", "-0.1", "--out", dir.path.string()}).code == kExitDomainError);
  const Run drift = run_cli({"portrait", "--b", "0.5", "--dt", "3", "--steps", "200", "--out", dir.path.string()});
  CHECK(drift.code == kExitNumericalFailure);
  const Json prov = Json::parse(slurp(dir / "portrait.provenance.json"));
  CHECK_FALSE(prov["failures"].empty());

  CHECK(run_cli({"--help"}).code == 0);
}

TEST_CASE("portrait command") {
  TempDir dir;
  const std::string out = dir.path.string();
  const Run r = run_cli({"portrait", "--a", "1.5", "--b", "-4", "--k", "0.018", "--out", out, "--svg", dir / "p.svg",
                         "--steps", "2000", "--res", "120:90"});
  REQUIRE(r.code == 0);
  const Json eq = Json::parse(slurp(dir / "equilibria.json"));
  REQUIRE(eq["equilibria"].size() == 6);
  int hyperbolic = 0;
  for (const auto& e : eq["equilibria"]) hyperbolic += e["stability"] == "hyperbolic";
  CHECK(hyperbolic == 3);

  const Dataset d = parse_csv(slurp(dir / "portrait.csv"));
  CHECK(d.columns == std::vector<std::string>{"trace_id", "source", "x", "y", "H"});
  std::set<std::string> sources;
  for (const auto& row : d.rows) sources.insert(std::get<std::string>(row[1]));
  CHECK(sources.count("flow") == 1);
  CHECK(sources.count("separatrix") == 1);
  CHECK(sources.count("contour") == 1);

  const std::string svg = slurp(dir / "p.svg");
  const Json prov = Json::parse(slurp(dir / "portrait.provenance.json"));
  std::size_t polylines = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++polylines;
  CHECK(polylines == prov["trace_count"].get<std::size_t>());
  CHECK(svg.find("<?xml") == 0);
  CHECK(svg.find("version=\"1.1\"") != std::string::npos);

  TempDir two;
  CHECK(run_cli({"portrait", "--b", "0.6", "--out", two.path.string(), "--steps", "400"}).code == 0);
  CHECK(Json::parse(slurp(two / "equilibria.json"))["equilibria"].size() == 2);
}

TEST_CASE("portrait determinism and config echo") {
  TempDir a, b, c;
  const std::vector<std::string> base{"portrait", "--b", "0.5", "--steps", "1000", "--res", "100:80"};
  auto with_out = [&](const TempDir& d) {
    auto args = base;
    args.push_back("--out");
    args.push_back(d.path.string());
    return args;
  };
  REQUIRE(run_cli(with_out(a)).code == 0);
  REQUIRE(run_cli(with_out(b)).code == 0);
  CHECK(slurp(a / "portrait.csv") == slurp(b / "portrait.csv"));
  CHECK(slurp(a / "equilibria.json") == slurp(b / "equilibria.json"));

  // Re-run from the echoed provenance alone, redirecting only the output.
  REQUIRE(run_cli({"portrait", "--config", a / "portrait.provenance.json", "--out", c.path.string()}).code == 0);
  CHECK(slurp(a / "portrait.csv") == slurp(c / "portrait.csv"));
  Json pa = Json::parse(slurp(a / "portrait.provenance.json"));
  Json pc = Json::parse(slurp(c / "portrait.provenance.json"));
  pa["config"].erase("out");
  pc["config"].erase("out");
  CHECK(pa["config"] == pc["config"]);
}

TEST_CASE("portrait reads seed files") {
  TempDir dir;
  {
    std::ofstream f(dir / "seeds.csv");
    f << "x,y\n0,0.5\n3.14159,1.5\n";
  }
  {
    std::ofstream f(dir / "seeds.json");
    f << "[[0, 0.5], [3.14159, 1.5]]";
  }
  for (const char* name : {"seeds.csv", "seeds.json"}) {
    TempDir out;
    REQUIRE(run_cli({"portrait", "--b", "0.5", "--seeds", dir / name, "--steps", "400", "--out", out.path.string()}).code == 0);
    const Dataset d = parse_csv(slurp(out / "portrait.csv"));
    std::set<double> flow_ids;
    for (const auto& row : d.rows)
      if (std::get<std::string>(row[1]) == "flow") flow_ids.insert(std::get<double>(row[0]));
    CHECK(flow_ids.size() == 2);
  }
  {
    std::ofstream f(dir / "bad.csv");
    f << "u,v\n0,1\n";
  }
  const Run bad = run_cli({"portrait", "--b", "0.5", "--seeds", dir / "bad.csv", "--out", dir.path.string()});
  CHECK(bad.code == kExitConfigError);
  CHECK(bad.err.find("seeds") != std::string::npos);
}

TEST_CASE("scan command") {
  TempDir dir;
  REQUIRE(run_cli({"scan", "--a", "1.5", "--k", "0.018", "--b-range", "0.3:0.7", "--samples", "9", "--out",
                   dir.path.string()})
              .code == 0);
  const Dataset d = parse_csv(slurp(dir / "scan.csv"));
  REQUIRE(d.rows.size() == 9);
  const auto cb = column(d, "b"), cn = column(d, "equilibrium_count"), c12 = column(d, "regime_I_II"),
             c23 = column(d, "regime_II_III");
  const std::vector<std::string> want23{"birkhoff_pair",  "birkhoff_pair",  "birkhoff_pair",
                                        "birkhoff_pair",  "birkhoff_pair",  "dimerised_pair",
                                        "chains_absent", "chains_absent", "chains_absent"};
  for (std::size_t i = 0; i < 9; ++i) {
    const double b = std::get<double>(d.rows[i][cb]);
    CHECK(b == doctest::Approx(0.3 + 0.05 * i).epsilon(1e-12));
    CHECK(std::get<std::string>(d.rows[i][c23]) == want23[i]);
    CHECK(std::get<std::string>(d.rows[i][c12]) == (b < 0.5625 ? "birkhoff_pair" : "chains_absent"));
    CHECK(std::get<double>(d.rows[i][cn]) == (b < 0.5625 ? 6.0 : 2.0));
    if (b > 0.5625) CHECK(std::holds_alternative<std::string>(d.rows[i][column(d, "residual_I_II")]));
  }
  CHECK(fs::exists(dir / "scan.provenance.json"));

  // At the triple point both pairs reconnect.
  TempDir t;
  REQUIRE(run_cli({"scan", "--k", "0.0625", "--b-range", "0.3:0.5", "--samples", "2", "--out", t.path.string()}).code == 0);
  const Dataset dt = parse_csv(slurp(t / "scan.csv"));
  CHECK(std::get<std::string>(dt.rows[0][column(dt, "regime_I_II")]) == "dimerised_pair");
  CHECK(std::get<std::string>(dt.rows[0][column(dt, "regime_II_III")]) == "birkhoff_pair");
  CHECK(std::get<std::string>(dt.rows[1][column(dt, "regime_I_II")]) == "at_reconnection");
  CHECK(std::get<std::string>(dt.rows[1][column(dt, "regime_II_III")]) == "at_reconnection");
}

TEST_CASE("scan edge cases") {
  TempDir dir;
  REQUIRE(run_cli({"scan", "--b-range", "0.5:0.5", "--samples", "1", "--out", dir.path.string()}).code == 0);
  const Dataset one = parse_csv(slurp(dir / "scan.csv"));
  REQUIRE(one.rows.size() == 1);
  CHECK(std::get<double>(one.rows[0][column(one, "residual_I_II")]) == residual_I_II(1.5, 0.5, 0.018));
  CHECK(std::get<double>(one.rows[0][column(one, "residual_II_III")]) == residual_II_III(1.5, 0.5, 0.018));
  CHECK(std::get<double>(one.rows[0][column(one, "equilibrium_count")]) == 6.0);

  TempDir z;
  REQUIRE(run_cli({"scan", "--b-range", "-1:1", "--samples", "3", "--topology", "--out", z.path.string()}).code == 0);
  const Dataset d = parse_csv(slurp(z / "scan.csv"));
  REQUIRE(d.rows.size() == 3);
  CHECK(std::get<double>(d.rows[1][0]) == 0.0);
  for (std::size_t c = 1; c < d.columns.size(); ++c) CHECK(std::get<std::string>(d.rows[1][c]) == "undefined");
  CHECK(std::get<std::string>(d.rows[2][column(d, "chain_topology_II_III")]) == "chains_absent");
  CHECK(std::holds_alternative<std::string>(d.rows[0][column(d, "chain_topology_II_III")]));

  TempDir topo;
  REQUIRE(run_cli({"scan", "--b-range", "0.5:0.54", "--samples", "2", "--topology", "--out", topo.path.string()}).code == 0);
  const Dataset dt = parse_csv(slurp(topo / "scan.csv"));
  CHECK(std::get<std::string>(dt.rows[0][column(dt, "chain_topology_II_III")]) == "separated");
  CHECK(std::get<std::string>(dt.rows[1][column(dt, "chain_topology_II_III")]) == "separated");

  CHECK(run_cli({"scan", "--b-range", "0.5:0.4"}).code == kExitConfigError);
  CHECK(run_cli({"scan", "--b-range", "0.4:0.5", "--samples", "0"}).code == kExitConfigError);
}

TEST_CASE("rotation command") {
  TempDir dir;
  REQUIRE(run_cli({"rotation", "--a", "2.5", "--b", "1.26", "--y-range", "-1:2", "--out", dir.path.string()}).code == 0);
  const Json s = Json::parse(slurp(dir / "rotation.json"));
  CHECK(std::abs(s["twistless"]["y_C1"].get<double>() - 1.0772) <= 1e-4);
  CHECK(std::abs(s["twistless"]["y_C2"].get<double>() - 0.2456) <= 1e-4);
  CHECK(s["twistless"]["closed_form_rho_C1"].get<double>() ==
        doctest::Approx(s["twistless"]["rho_C1"].get<double>()).epsilon(1e-10));
  const Dataset d = parse_csv(slurp(dir / "rotation.csv"));
  CHECK(d.columns == std::vector<std::string>{"y", "F", "rho", "dF"});
  CHECK(d.rows.size() == 301);
  bool saw_zero = false;
  for (const auto& row : d.rows)
    if (std::get<double>(row[0]) == 0.0) {
      saw_zero = true;
      CHECK(std::get<double>(row[1]) == 0.0);
    }
  CHECK(saw_zero);

  TempDir twist;
  REQUIRE(run_cli({"rotation", "--a", "1.5", "--b", "0.8", "--out", twist.path.string()}).code == 0);
  const Json t = Json::parse(slurp(twist / "rotation.json"));
  CHECK(t["twistless"].is_null());
  CHECK(t["note"].is_string());
  CHECK(run_cli({"rotation", "--a", "1.5"}).code == kExitConfigError);
}
