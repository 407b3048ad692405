#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groves/core.hpp"
#include "json.hpp"

namespace groves::report {

struct Row {
  Tuple profile;
  std::string decision;
  Tuple taxes;
  Rational total_tax;
  Tuple utilities;
  Rational welfare;

  friend bool operator==(const Row&, const Row&) = default;
};

/// Machine-readable result of one CLI invocation. Every exact quantity is
/// serialized as a "p/q" string; `details` and `witnesses` follow the same rule.
struct Report {
  std::string scenario;
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  std::vector<Row> rows;
  std::map<std::string, std::string> verdicts;
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::object();
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::optional<double> runtime_ms;
  std::optional<std::string> timestamp;

  friend bool operator==(const Report&, const Report&) = default;
};

nlohmann::ordered_json rational_json(const Rational& value);
nlohmann::ordered_json tuple_json(const Tuple& values);
Rational rational_from_json(const nlohmann::ordered_json& j);
Tuple tuple_from_json(const nlohmann::ordered_json& j);

/// `decimals` adds rounded "<field>_decimal" companions next to exact fields.
nlohmann::ordered_json to_json(const Report& report, std::optional<int> decimals = std::nullopt);
Report from_json(const nlohmann::ordered_json& j);

/// One line per row: profile, decision, taxes, total, welfare (exact "p/q"),
/// followed by verdict lines as "# name,value".
std::string to_csv(const Report& report, std::optional<int> decimals = std::nullopt);

/// Table file: JSON object mapping "v1,v2,..." (descending) to "p/q".
RebateTable read_table(const std::string& path);
nlohmann::ordered_json table_json(const RebateTable& table);
RebateTable table_from_json(const nlohmann::ordered_json& j);

}  // namespace groves::report
