#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

namespace nontwist::cli {

using Json = nlohmann::ordered_json;

/// A CSV/JSON cell: a number, or a text label (regime names, sentinels).
using Cell = std::variant<double, std::string>;

struct Dataset {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Json provenance = Json::object();

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Shortest decimal string that parses back to exactly the same double.
std::string format_number(double v);

/// Header row plus one line per row, LF endings. Provenance is not part of
/// the CSV carrier; it travels in a sidecar JSON document.
std::string to_csv(const Dataset& d);

/// Parses text produced by to_csv. Cells that parse completely as numbers
/// become doubles; everything else stays text.
Dataset parse_csv(std::string_view text);

/// Single JSON document: schema, columns, rows, provenance.
Json to_json(const Dataset& d);
Dataset dataset_from_json(const Json& j);

}  // namespace nontwist::cli
