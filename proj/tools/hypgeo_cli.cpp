#include <iostream>

#include "CLI11.hpp"
#include "hypgeo/error.hpp"
#include "hypgeo/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Closed geodesics, flow boxes and random models on hyperbolic surfaces"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  double tolerance = 0;

  struct Sub {
    CLI::App* app;
    std::string name;
  };
  std::vector<Sub> subs;
  const std::vector<std::pair<std::string, std::string>> help = {
      {"gen-surface", "build and serialize a regular surface"},
      {"census", "enumerate closed geodesics and classify simple / filling"},
      {"closing-check", "compare the flow-box closing census with the word census"},
      {"mixing", "Monte-Carlo mixing curve for two flow boxes"},
      {"net", "Delaunay net build, invariants and filter soundness"},
      {"cover", "random finite covers: genus and systole checks"},
      {"bm", "random trivalent ribbon graphs and their L/R geodesics"},
      {"mc", "birthday or coupon-collector sweeps"},
  };
  for (const auto& [name, text] : help) {
    CLI::App* s = app.add_subcommand(name, text);
    s->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    s->add_option("--seed", seed, "master seed");
    s->add_option("--out", out_dir, "output directory");
    s->add_option("--threads", threads, "OpenMP threads")->check(CLI::PositiveNumber);
    s->add_option("--tolerance", tolerance, "length tolerance override")->check(CLI::PositiveNumber);
    subs.push_back({s, name});
  }
  CLI11_PARSE(app, argc, argv);

  for (const auto& s : subs) {
    if (!s.app->parsed()) continue;
    hypgeo::RunConfig cfg;
    try {
      cfg = hypgeo::load_config(s.name, config_path);
    } catch (const hypgeo::Error& e) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    if (s.app->count("--seed")) cfg.seed = seed;
    if (s.app->count("--out")) cfg.out_dir = out_dir;
    if (s.app->count("--threads")) cfg.threads = threads;
    if (s.app->count("--tolerance")) cfg.tolerance = tolerance;
    std::string msg;
    int status = hypgeo::run(cfg, &msg);
    (status == 0 ? std::cout : std::cerr) << msg;
    return status;
  }
  return 2;
}
