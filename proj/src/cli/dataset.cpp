#include "nontwist/cli/dataset.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>

namespace nontwist::cli {

std::string format_number(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("cannot format a non-finite number");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

namespace {

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n\r") != std::string_view::npos;
}

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_number(*d);
  const auto& s = std::get<std::string>(c);
  return needs_quotes(s) ? quote(s) : s;
}

Cell parse_cell(std::string_view s, bool quoted) {
  if (!quoted && !s.empty()) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && std::isfinite(v)) return v;
  }
  return std::string(s);
}

std::vector<std::pair<std::string, bool>> split_line(std::string_view line) {
  std::vector<std::pair<std::string, bool>> cells;
  std::string cur;
  bool quoted = false;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_quotes) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      in_quotes = quoted = true;
    } else if (c == ',') {
      cells.emplace_back(std::move(cur), quoted);
      cur.clear();
      quoted = false;
    } else {
      cur += c;
    }
  }
  cells.emplace_back(std::move(cur), quoted);
  return cells;
}

}  // namespace

std::string to_csv(const Dataset& d) {
  std::string out;
  for (std::size_t i = 0; i < d.columns.size(); ++i) {
    if (i) out += ',';
    out += needs_quotes(d.columns[i]) ? quote(d.columns[i]) : d.columns[i];
  }
  out += '\n';
  for (const auto& row : d.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_cell(row[i]);
    }
    out += '\n';
  }
  return out;
}

Dataset parse_csv(std::string_view text) {
  Dataset d;
  bool header = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (header) {
      for (auto& [s, _] : cells) d.columns.push_back(std::move(s));
      header = false;
      continue;
    }
    if (cells.size() != d.columns.size())
      throw std::runtime_error("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(d.columns.size()));
    std::vector<Cell> row;
    row.reserve(cells.size());
    for (const auto& [s, q] : cells) row.push_back(parse_cell(s, q));
    d.rows.push_back(std::move(row));
  }
  return d;
}

Json to_json(const Dataset& d) {
  Json j;
  j["schema"] = d.schema;
  j["columns"] = d.columns;
  Json rows = Json::array();
  for (const auto& row : d.rows) {
    Json r = Json::array();
    for (const auto& c : row) {
      if (const double* v = std::get_if<double>(&c)) r.push_back(*v);
      else r.push_back(std::get<std::string>(c));
    }
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["provenance"] = d.provenance;
  return j;
}

Dataset dataset_from_json(const Json& j) {
  Dataset d;
  d.schema = j.at("schema").get<std::string>();
  d.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<Cell> row;
    for (const auto& c : r) {
      if (c.is_number()) row.emplace_back(c.get<double>());
      else row.emplace_back(c.get<std::string>());
    }
    d.rows.push_back(std::move(row));
  }
  if (j.contains("provenance")) d.provenance = j.at("provenance");
  return d;
}

}  // namespace nontwist::cli
