#include "nontwist/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nontwist::cli {

const std::vector<FieldSpec>& known_fields() {
  static const std::vector<FieldSpec> fields{
      {"a", FieldKind::number},         {"b", FieldKind::number},
      {"k", FieldKind::number},         {"b-range", FieldKind::range},
      {"y-range", FieldKind::range},    {"window", FieldKind::window},
      {"res", FieldKind::resolution},   {"dt", FieldKind::number},
      {"steps", FieldKind::integer},    {"samples", FieldKind::integer},
      {"seeds", FieldKind::path},       {"svg", FieldKind::path},
      {"out", FieldKind::path},         {"triple", FieldKind::flag},
      {"topology", FieldKind::flag},
  };
  return fields;
}

namespace {

const FieldSpec& spec_of(std::string_view field) {
  const auto& f = known_fields();
  const auto it = std::find_if(f.begin(), f.end(), [&](const FieldSpec& s) { return s.name == field; });
  if (it == f.end()) throw ConfigError(std::string(field), "unknown setting");
  return *it;
}

double to_double(std::string_view s, std::string_view field) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
    throw ConfigError(std::string(field), "expected a finite number, got '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace

Json default_config() {
  Json j = Json::object();
  j["a"] = 1.5;
  j["k"] = 0.018;
  return j;
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
  if (!j.is_object()) throw ConfigError("config", "expected a flat JSON object");
  return j;
}

Range parse_range(std::string_view text, std::string_view field) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError(std::string(field), "expected lo:hi, got '" + std::string(text) + "'");
  return {to_double(parts[0], field), to_double(parts[1], field)};
}

Window parse_window(std::string_view text, std::string_view field) {
  const auto parts = split(text, ':');
  if (parts.size() != 4)
    throw ConfigError(std::string(field), "expected x0:x1:y0:y1, got '" + std::string(text) + "'");
  Window w;
  w.x_min = to_double(parts[0], field);
  w.x_max = to_double(parts[1], field);
  w.y_min = to_double(parts[2], field);
  w.y_max = to_double(parts[3], field);
  if (!(w.x_min < w.x_max) || !(w.y_min < w.y_max))
    throw ConfigError(std::string(field), "window bounds must satisfy x0 < x1 and y0 < y1");
  if (w.x_min < 0.0 || w.x_max > kTwoPi + 1e-9)
    throw ConfigError(std::string(field), "x-range must lie within [0, 2pi]");
  w.x_max = std::min(w.x_max, kTwoPi);
  if (std::abs(w.x_max - kTwoPi) <= 1e-9) w.x_max = kTwoPi;
  return w;
}

std::pair<int, int> parse_resolution(std::string_view text, std::string_view field) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ConfigError(std::string(field), "expected NX:NY, got '" + std::string(text) + "'");
  const double nx = to_double(parts[0], field);
  const double ny = to_double(parts[1], field);
  if (nx != std::floor(nx) || ny != std::floor(ny) || nx < 2 || ny < 2 || nx > 1e5 || ny > 1e5)
    throw ConfigError(std::string(field), "resolution must be integers >= 2");
  return {static_cast<int>(nx), static_cast<int>(ny)};
}

Json normalize_value(std::string_view field, const Json& raw) {
  const FieldSpec& spec = spec_of(field);
  const std::string name(field);
  switch (spec.kind) {
    case FieldKind::number:
      if (raw.is_number()) return raw.get<double>();
      if (raw.is_string()) return to_double(raw.get<std::string>(), field);
      throw ConfigError(name, "expected a number");
    case FieldKind::integer: {
      double v = 0.0;
      if (raw.is_number()) v = raw.get<double>();
      else if (raw.is_string()) v = to_double(raw.get<std::string>(), field);
      else throw ConfigError(name, "expected an integer");
      if (v != std::floor(v)) throw ConfigError(name, "expected an integer");
      return static_cast<long>(v);
    }
    case FieldKind::flag:
      if (raw.is_boolean()) return raw;
      if (raw.is_string()) {
        const auto s = raw.get<std::string>();
        if (s == "true" || s == "1") return true;
        if (s == "false" || s == "0") return false;
      }
      throw ConfigError(name, "expected true or false");
    case FieldKind::range:
      if (!raw.is_string()) throw ConfigError(name, "expected a lo:hi string");
      parse_range(raw.get<std::string>(), field);
      return raw;
    case FieldKind::window:
      if (!raw.is_string()) throw ConfigError(name, "expected an x0:x1:y0:y1 string");
      parse_window(raw.get<std::string>(), field);
      return raw;
    case FieldKind::resolution:
      if (!raw.is_string()) throw ConfigError(name, "expected an NX:NY string");
      parse_resolution(raw.get<std::string>(), field);
      return raw;
    case FieldKind::path:
      if (!raw.is_string()) throw ConfigError(name, "expected a path string");
      return raw;
  }
  throw ConfigError(name, "unsupported setting");
}

Json merge_config(const Json& defaults, const Json& file, const Json& flags) {
  Json merged = Json::object();
  for (const Json* layer : {&defaults, &file, &flags}) {
    if (layer->is_null()) continue;
    for (const auto& [key, value] : layer->items()) merged[key] = normalize_value(key, value);
  }
  // stable key order for reproducible provenance
  Json ordered = Json::object();
  for (const auto& spec : known_fields()) {
    const std::string key(spec.name);
    if (merged.contains(key)) ordered[key] = merged[key];
  }
  return ordered;
}

bool RunConfig::has(std::string_view field) const {
  return values_.contains(std::string(field));
}

const Json& RunConfig::require(std::string_view field) const {
  const std::string key(field);
  if (!values_.contains(key)) throw ConfigError(key, "required for '" + command_ + "'");
  return values_.at(key);
}

double RunConfig::number(std::string_view field) const { return require(field).get<double>(); }
long RunConfig::integer(std::string_view field) const { return require(field).get<long>(); }

bool RunConfig::flag(std::string_view field) const {
  const std::string key(field);
  return values_.contains(key) && values_.at(key).get<bool>();
}

Range RunConfig::range(std::string_view field) const {
  return parse_range(require(field).get<std::string>(), field);
}

std::optional<Window> RunConfig::window(std::string_view field) const {
  if (!has(field)) return std::nullopt;
  return parse_window(values_.at(std::string(field)).get<std::string>(), field);
}

std::optional<std::pair<int, int>> RunConfig::resolution(std::string_view field) const {
  if (!has(field)) return std::nullopt;
  return parse_resolution(values_.at(std::string(field)).get<std::string>(), field);
}

std::string RunConfig::path(std::string_view field) const {
  return require(field).get<std::string>();
}

}  // namespace nontwist::cli
