#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "hypgeo/error.hpp"
#include "hypgeo/report.hpp"

using namespace hypgeo;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Minimal RFC-4180 reader: records end at CRLF outside quotes.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> out(1);
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') field += '"', ++i;
      else if (c == '"') quoted = false;
      else field += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.back().push_back(field);
      field.clear();
    } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      out.back().push_back(field);
      field.clear();
      out.emplace_back();
      ++i;
    } else {
      field += c;
    }
  }
  if (out.back().empty()) out.pop_back();
  return out;
}

// Splits a CSV artifact into its two header comment lines and the table body.
void split_artifact(const std::string& s, std::string& schema, json& config, std::string& body) {
  std::size_t a = s.find('\n'), b = s.find('\n', a + 1);
  REQUIRE(s.rfind("# schema: ", 0) == 0);
  REQUIRE(s.compare(a + 1, 10, "# config: ") == 0);
  schema = s.substr(10, a - 10);
  config = json::parse(s.substr(a + 11, b - a - 11));
  body = s.substr(b + 1);
}

RunConfig config_for(const std::string& command, json params) {
  RunConfig c;
  c.command = command;
  c.params = std::move(params);
  c.seed = 3;
  return c;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("hypgeo_report_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("number formatting round-trips") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1) == "1");
  CHECK(format_double(1e21) == "1e+21");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_double(-INFINITY) == "-inf");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 2000; ++i) {
    double x = std::exp(u(rng)) * (i % 2 ? 1 : -1);
    CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
  }
  CHECK(format_cell(Cell{std::int64_t{-7}}) == "-7");
  CHECK(format_cell(Cell{true}) == "true");
  CHECK(format_cell(Cell{std::string("a b")}) == "a b");
}

TEST_CASE("CSV quoting") {
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("") == "");
  CHECK(csv_quote("a,b") == "\"a,b\"");
  CHECK(csv_quote("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_quote("two\nlines") == "\"two\nlines\"");
  CHECK(csv_quote(" padded") == "\" padded\"");

  Table t{"demo/2", {"name", "x", "n", "flag"}, {}};
  const std::vector<std::string> names = {"plain", "a,b", "q\"uote", "line\r\nbreak", " lead", ""};
  for (std::size_t i = 0; i < names.size(); ++i)
    t.add({names[i], 1.0 / (i + 3), static_cast<std::int64_t>(i) - 2, i % 2 == 0});
  json cfg = {{"command", "demo"}, {"seed", 4}};
  std::string schema, body;
  json header;
  split_artifact(to_csv(t, cfg), schema, header, body);
  CHECK(schema == "demo/2");
  CHECK(header == cfg);
  auto rows = parse_csv(body);
  REQUIRE(rows.size() == names.size() + 1);
  CHECK(rows[0] == t.columns);
  for (std::size_t i = 0; i < names.size(); ++i) {
    REQUIRE(rows[i + 1].size() == 4);
    CHECK(rows[i + 1][0] == names[i]);
    CHECK(std::strtod(rows[i + 1][1].c_str(), nullptr) == 1.0 / (i + 3));
    CHECK(rows[i + 1][2] == std::to_string(static_cast<int>(i) - 2));
  }

  json j = hypgeo::to_json(t, cfg);
  CHECK(j["schema"] == "demo/2");
  CHECK(j["config"] == cfg);
  REQUIRE(j["rows"].size() == names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    CHECK(j["rows"][i]["name"] == names[i]);
    CHECK(j["rows"][i]["x"].get<double>() == 1.0 / (i + 3));
    CHECK(j["rows"][i]["flag"].get<bool>() == (i % 2 == 0));
  }

  CHECK_THROWS_AS(t.add({1.0}), Error);
  CHECK(t.column("n") == 2);
  CHECK_THROWS_AS(t.column("missing"), Error);
}

TEST_CASE("census report") {
  RunConfig cfg = config_for("census", {{"L", 6.0}});
  ReportBundle b = run_command(cfg);
  CHECK(b.ok());
  const Table& classes = b.table("classes");
  const Table& bins = b.table("bins");
  const Table& pgt = b.table("pgt");
  const std::size_t iN = bins.column("N"), iS = bins.column("N_simp"), iNS = bins.column("N_nonsimple"),
                    iF = bins.column("N_fill"), iNF = bins.column("N_nonfill"), ifs = bins.column("frac_simp");
  std::int64_t total = 0;
  for (const auto& r : bins.rows) {
    auto n = std::get<std::int64_t>(r[iN]);
    CHECK(std::get<std::int64_t>(r[iS]) + std::get<std::int64_t>(r[iNS]) == n);
    CHECK(std::get<std::int64_t>(r[iF]) + std::get<std::int64_t>(r[iNF]) == n);
    CHECK(std::get<double>(r[ifs]) == (n ? static_cast<double>(std::get<std::int64_t>(r[iS])) / n : 0.0));
    total += n;
  }
  CHECK(total == static_cast<std::int64_t>(classes.rows.size()));
  // every class lands in exactly one bin and one simplicity bucket
  const std::size_t ilen = classes.column("length"), isimp = classes.column("simple"), icount = classes.column("self_intersections");
  std::int64_t simp = 0;
  for (const auto& r : classes.rows) {
    bool s = std::get<bool>(r[isimp]);
    simp += s;
    if (s) CHECK(std::get<std::int64_t>(r[icount]) == 0);
  }
  std::int64_t simp_bins = 0;
  for (const auto& r : bins.rows) simp_bins += std::get<std::int64_t>(r[iS]);
  CHECK(simp_bins == simp);
  for (const auto& r : pgt.rows) {
    double x = std::get<double>(r[pgt.column("L")]);
    std::int64_t n = 0;
    for (const auto& c : classes.rows) n += std::get<double>(c[ilen]) <= x;
    CHECK(std::get<std::int64_t>(r[pgt.column("N")]) == n);
    if (n) CHECK(std::get<double>(r[pgt.column("ratio")]) == doctest::Approx(n * x / std::exp(x)).epsilon(1e-12));
  }
  CHECK(classes.rows.size() == 24 + 48 + 24);
  CHECK(b.summary.find("PGT ratio") != std::string::npos);
}

TEST_CASE("determinism and thread independence") {
  for (auto [cmd, params] : {std::pair<std::string, json>{"census", {{"L", 5.0}}},
                             std::pair<std::string, json>{"mixing", {{"trials", 20000}, {"t_grid", {0.0, 1.0}}}},
                             std::pair<std::string, json>{"mc", {{"n", 1000}, {"trials", 5000}}},
                             std::pair<std::string, json>{"bm", {{"samples", 5}, {"n_values", {1, 3}}}}}) {
    CAPTURE(cmd);
    RunConfig a = config_for(cmd, params), b = a;
    b.threads = 1;
    ReportBundle x = run_command(a), y = run_command(b);
    CHECK(a.resolved() == b.resolved());
    REQUIRE(x.tables.size() == y.tables.size());
    for (std::size_t i = 0; i < x.tables.size(); ++i)
      CHECK(to_csv(x.tables[i].second, a.resolved()) == to_csv(y.tables[i].second, b.resolved()));
    CHECK(x.summary == y.summary);
  }
  RunConfig c = config_for("mixing", {{"trials", 20000}, {"t_grid", {0.0, 1.0}}});
  RunConfig d = c;
  d.seed = 4;
  CHECK(to_csv(run_command(c).table("mixing"), c.resolved()) != to_csv(run_command(d).table("mixing"), d.resolved()));
}

TEST_CASE("artifacts on disk") {
  fs::path dir = scratch("artifacts");
  RunConfig cfg = config_for("gen-surface", json::object());
  cfg.out_dir = dir.string();
  std::string msg;
  CHECK(run(cfg, &msg) == 0);
  CHECK(msg.find("genus 2") != std::string::npos);
  for (const char* f : {"surface.csv", "surface.json", "surface-group.json", "summary.txt"}) CHECK(fs::exists(dir / f));
  std::ifstream in(dir / "surface.csv", std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string schema, body;
  json header;
  split_artifact(ss.str(), schema, header, body);
  CHECK(schema == "surface/1");
  CHECK(header == cfg.resolved());
  CHECK(header["params"]["genus"] == 2);
  CHECK(!header.contains("threads"));
  std::ifstream sj(dir / "surface.json");
  json mirror = json::parse(sj);
  CHECK(mirror["config"] == header);
  auto rows = parse_csv(body);
  REQUIRE(rows.size() == 2);
  CHECK(std::strtod(rows[1][3].c_str(), nullptr) == mirror["rows"][0]["area"].get<double>());
  // the serialized surface loads back through the surface_file parameter
  RunConfig again = config_for("gen-surface", {{"surface_file", (dir / "surface-group.json").string()}});
  ReportBundle rb = run_command(again);
  CHECK(rb.files.at(0).second == std::string(std::istreambuf_iterator<char>(std::ifstream(dir / "surface-group.json").rdbuf()), {}));
  std::ifstream sum(dir / "summary.txt");
  std::string first;
  std::getline(sum, first);
  CHECK(first == "# config: " + header.dump());
  fs::remove_all(dir);
}

TEST_CASE("configuration files") {
  fs::path dir = scratch("config");
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream(dir / name) << text;
    return (dir / name).string();
  };
  RunConfig flat = load_config("census", write("flat.json", "{\"seed\": 9, \"L\": 4.5, \"bin_width\": 1.0}"));
  CHECK(flat.seed == 9);
  CHECK(flat.params["L"] == 4.5);
  RunConfig nested = load_config("census", write("nested.json",
      "// comments are allowed\n{\"seed\": 2, \"census\": {\"L\": 5.5}, \"mc\": {\"n\": 7}, \"tolerance\": 1e-8}"));
  CHECK(nested.seed == 2);
  CHECK(nested.params == json{{"L", 5.5}});
  CHECK(nested.tolerance == 1e-8);
  CHECK(nested.resolved()["tolerance"] == 1e-8);
  CHECK(nested.resolved()["params"]["bin_width"] == 0.5);
  CHECK(load_config("census", "").params.empty());
  auto kind = [](auto f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvariantViolation;
  };
  CHECK(kind([&] { load_config("census", write("bad.json", "{\"L\": ")); }) == ErrorKind::ConfigError);
  CHECK(kind([&] { load_config("census", write("arr.json", "[1, 2]")); }) == ErrorKind::ConfigError);
  CHECK(kind([&] { load_config("census", (dir / "absent.json").string()); }) == ErrorKind::ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("exit statuses") {
  CHECK(run(config_for("census", {{"L", 4.0}})) == 0);
  std::string msg;
  CHECK(run(config_for("census", {{"Lmax", 4.0}}), &msg) == 2);
  CHECK(msg.find("unknown parameter 'Lmax'") != std::string::npos);
  CHECK(run(config_for("nonsense", json::object())) == 2);
  CHECK(run(config_for("gen-surface", {{"pairing", "twisted"}})) == 2);
  CHECK(run(config_for("mc", {{"kind", "lottery"}})) == 2);
  CHECK(run(config_for("census", {{"L", "long"}})) == 2);
  // a module error that is not a configuration problem: the ratio grid passes the census
  CHECK(run(config_for("census", {{"L", 4.0}, {"pgt_grid", {5.0}}}), &msg) == 3);
  CHECK(msg.rfind("census: ", 0) == 0);
}
