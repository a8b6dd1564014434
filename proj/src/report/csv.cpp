#include <cmath>
#include <cstdio>

#include "hypgeo/error.hpp"
#include "hypgeo/report.hpp"

namespace hypgeo {

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw Error(ErrorKind::InvariantViolation, "row width differs from header in " + schema);
  rows.push_back(std::move(row));
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw Error(ErrorKind::ConfigError, "no column " + name + " in " + schema);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cell(const Cell& c) {
  if (auto p = std::get_if<std::int64_t>(&c)) return std::to_string(*p);
  if (auto p = std::get_if<double>(&c)) return format_double(*p);
  if (auto p = std::get_if<bool>(&c)) return *p ? "true" : "false";
  return std::get<std::string>(c);
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos && (s.empty() || (s.front() != ' ' && s.back() != ' ')))
    return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string to_csv(const Table& t, const nlohmann::json& config) {
  std::string out = "# schema: " + t.schema + "\n# config: " + config.dump() + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_quote(t.columns[i]);
  out += "\r\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_quote(format_cell(row[i]));
    out += "\r\n";
  }
  return out;
}

nlohmann::json to_json(const Table& t, const nlohmann::json& config) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const Cell& c = row[i];
      if (auto p = std::get_if<std::int64_t>(&c)) r[t.columns[i]] = *p;
      else if (auto p = std::get_if<double>(&c)) {
        if (std::isfinite(*p)) r[t.columns[i]] = *p;
        else r[t.columns[i]] = format_double(*p);
      } else if (auto p = std::get_if<bool>(&c)) r[t.columns[i]] = *p;
      else r[t.columns[i]] = std::get<std::string>(c);
    }
    rows.push_back(std::move(r));
  }
  return {{"schema", t.schema}, {"config", config}, {"columns", t.columns}, {"rows", rows}};
}

const Table& ReportBundle::table(const std::string& name) const {
  for (const auto& [n, t] : tables)
    if (n == name) return t;
  throw Error(ErrorKind::ConfigError, "no table " + name);
}

}  // namespace hypgeo
