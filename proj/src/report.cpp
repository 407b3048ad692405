#include "groves/report.hpp"

#include <fstream>
#include <sstream>

namespace groves::report {

using json = nlohmann::ordered_json;

json rational_json(const Rational& value) { return to_string(value); }

json tuple_json(const Tuple& values) {
  json out = json::array();
  for (const auto& v : values) out.push_back(rational_json(v));
  return out;
}

Rational rational_from_json(const json& j) {
  if (!j.is_string()) throw ArgumentError("expected an exact rational string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

Tuple tuple_from_json(const json& j) {
  if (!j.is_array()) throw ArgumentError("expected an array of rationals, got " + j.dump());
  Tuple out;
  for (const auto& v : j) out.push_back(rational_from_json(v));
  return out;
}

namespace {

json decimal_tuple(const Tuple& values, int digits) {
  json out = json::array();
  for (const auto& v : values) out.push_back(to_decimal(v, digits));
  return out;
}

}  // namespace

json to_json(const Report& report, std::optional<int> decimals) {
  json out;
  out["scenario"] = report.scenario;
  out["settings"] = report.settings;
  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["profile"] = tuple_json(row.profile);
    r["decision"] = row.decision;
    r["taxes"] = tuple_json(row.taxes);
    r["total_tax"] = rational_json(row.total_tax);
    r["utilities"] = tuple_json(row.utilities);
    r["welfare"] = rational_json(row.welfare);
    if (decimals) {
      r["taxes_decimal"] = decimal_tuple(row.taxes, *decimals);
      r["total_tax_decimal"] = to_decimal(row.total_tax, *decimals);
      r["welfare_decimal"] = to_decimal(row.welfare, *decimals);
    }
    rows.push_back(std::move(r));
  }
  out["rows"] = std::move(rows);
  json verdicts = json::object();
  for (const auto& [k, v] : report.verdicts) verdicts[k] = v;
  out["verdicts"] = std::move(verdicts);
  out["witnesses"] = report.witnesses;
  out["details"] = report.details;
  if (report.runtime_ms) out["runtime_ms"] = *report.runtime_ms;
  if (report.timestamp) out["timestamp"] = *report.timestamp;
  return out;
}

Report from_json(const json& j) {
  Report out;
  out.scenario = j.at("scenario").get<std::string>();
  out.settings = j.at("settings");
  for (const auto& r : j.at("rows")) {
    Row row;
    row.profile = tuple_from_json(r.at("profile"));
    row.decision = r.at("decision").get<std::string>();
    row.taxes = tuple_from_json(r.at("taxes"));
    row.total_tax = rational_from_json(r.at("total_tax"));
    row.utilities = tuple_from_json(r.at("utilities"));
    row.welfare = rational_from_json(r.at("welfare"));
    out.rows.push_back(std::move(row));
  }
  for (const auto& [k, v] : j.at("verdicts").items()) out.verdicts[k] = v.get<std::string>();
  out.witnesses = j.at("witnesses");
  out.details = j.at("details");
  if (j.contains("runtime_ms")) out.runtime_ms = j.at("runtime_ms").get<double>();
  if (j.contains("timestamp")) out.timestamp = j.at("timestamp").get<std::string>();
  return out;
}

std::string to_csv(const Report& report, std::optional<int> decimals) {
  std::ostringstream out;
  const std::size_t n = report.rows.empty() ? 0 : report.rows.front().profile.size();
  out << "profile,decision";
  for (std::size_t i = 1; i <= n; ++i) out << ",t" << i;
  out << ",total_tax,welfare";
  if (decimals) out << ",total_tax_decimal,welfare_decimal";
  out << '\n';
  for (const auto& row : report.rows) {
    out << '"' << join(row.profile, " ") << "\"," << row.decision;
    for (const auto& t : row.taxes) out << ',' << to_string(t);
    out << ',' << to_string(row.total_tax) << ',' << to_string(row.welfare);
    if (decimals) {
      out << ',' << to_decimal(row.total_tax, *decimals) << ','
          << to_decimal(row.welfare, *decimals);
    }
    out << '\n';
  }
  for (const auto& [k, v] : report.verdicts) out << "# " << k << ',' << v << '\n';
  for (const auto& [k, v] : report.details.items()) {
    out << "# " << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  return out.str();
}

json table_json(const RebateTable& table) {
  json out = json::object();
  for (const auto& [key, value] : table) out[join(key)] = rational_json(value);
  return out;
}

RebateTable table_from_json(const json& j) {
  if (!j.is_object()) throw ArgumentError("rebate table file must hold a JSON object");
  RebateTable table;
  for (const auto& [key, value] : j.items()) {
    Tuple others = parse_tuple(key);
    if (canonical(others) != others) {
      throw ArgumentError("rebate table key '" + key + "' is not in descending order");
    }
    table.set(std::move(others), rational_from_json(value));
  }
  return table;
}

RebateTable read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open rebate table file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ArgumentError("rebate table file '" + path + "': " + e.what());
  }
  return table_from_json(j);
}

}  // namespace groves::report
