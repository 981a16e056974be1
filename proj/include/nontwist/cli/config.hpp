#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nontwist/cli/dataset.hpp"
#include "nontwist/trace.hpp"

namespace nontwist::cli {

/// Invalid or missing configuration. The message names the offending field.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class FieldKind { number, integer, flag, range, window, resolution, path };

struct FieldSpec {
  std::string_view name;
  FieldKind kind;
};

/// Every key accepted on the command line and in config files.
const std::vector<FieldSpec>& known_fields();

/// Built-in defaults: a = 1.5, k = 0.018.
Json default_config();

/// Reads a flat key-value JSON config. A provenance document is accepted
/// too; its "config" member is used.
Json load_config_file(const std::string& path);

/// Converts one raw value to the canonical JSON form of its field
/// (numbers for number/integer, bool for flags, "lo:hi" strings for ranges).
Json normalize_value(std::string_view field, const Json& raw);

/// flags override file values, which override defaults. Unknown keys throw.
Json merge_config(const Json& defaults, const Json& file, const Json& flags);

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

Range parse_range(std::string_view text, std::string_view field);
Window parse_window(std::string_view text, std::string_view field);
std::pair<int, int> parse_resolution(std::string_view text, std::string_view field);

/// Typed, validated accessors on a merged config.
class RunConfig {
 public:
  RunConfig(std::string command, Json values) : command_(std::move(command)), values_(std::move(values)) {}

  const std::string& command() const { return command_; }
  const Json& values() const { return values_; }

  bool has(std::string_view field) const;
  double number(std::string_view field) const;
  long integer(std::string_view field) const;
  bool flag(std::string_view field) const;
  Range range(std::string_view field) const;
  std::optional<Window> window(std::string_view field) const;
  std::optional<std::pair<int, int>> resolution(std::string_view field) const;
  std::string path(std::string_view field) const;

 private:
  const Json& require(std::string_view field) const;

  std::string command_;
  Json values_;
};

}  // namespace nontwist::cli
