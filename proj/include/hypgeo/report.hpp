#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace hypgeo {

using Cell = std::variant<std::int64_t, double, std::string, bool>;

struct Table {
  std::string schema;  // "name/version"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
  std::size_t column(const std::string& name) const;
};

std::string format_double(double x);  // 17 significant digits
std::string format_cell(const Cell& c);
std::string csv_quote(const std::string& s);
// Header comment lines with the schema and the run configuration, then the table.
std::string to_csv(const Table& t, const nlohmann::json& config);
nlohmann::json to_json(const Table& t, const nlohmann::json& config);

struct ReportBundle {
  std::vector<std::pair<std::string, Table>> tables;
  std::vector<std::pair<std::string, std::string>> files;  // extra artifacts
  std::string summary;
  std::vector<std::string> violations;

  const Table& table(const std::string& name) const;
  bool ok() const { return violations.empty(); }
};

struct RunConfig {
  std::string command;
  nlohmann::json params = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::string out_dir;
  int threads = 0;
  std::optional<double> tolerance;

  // Everything that determines the artifacts; written into every header.
  nlohmann::json resolved() const;
};

RunConfig load_config(const std::string& command, const std::string& path);
const std::vector<std::string>& commands();

ReportBundle run_command(const RunConfig& cfg);
void write_bundle(const ReportBundle& b, const RunConfig& cfg);
// Exit status: 0 success, 1 invariant violation, 2 configuration error, 3 other module error.
int run(const RunConfig& cfg, std::string* message = nullptr);

}  // namespace hypgeo
