#include <benchmark/benchmark.h>

#include "hypgeo/ball.hpp"
#include "hypgeo/dynamics.hpp"
#include "hypgeo/random_models.hpp"

using namespace hypgeo;

namespace {

const SurfaceGroup& genus2() {
  static const SurfaceGroup S = build_regular_surface(2);
  return S;
}

void BM_BallWalk(benchmark::State& st) {
  const Exec exec = st.range(0) ? Exec::parallel : Exec::serial;
  for (auto _ : st) {
    BallWalker w(genus2(), 11.0, exec);
    std::size_t n = 0;
    w.run([&](const Mat2&, std::uint32_t, double) { ++n; });
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_BallWalk)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Mixing(benchmark::State& st) {
  const Exec exec = st.range(0) ? Exec::parallel : Exec::serial;
  const SurfaceGroup& S = genus2();
  FlowBox b = make_box(S, frame_at(Point(0, 1), 0), 0.5);
  for (auto _ : st) {
    auto m = mixing_curve(S, b, b, {0.0, 4.0}, 200000, 11, exec);
    benchmark::DoNotOptimize(m.mu1);
  }
}
BENCHMARK(BM_Mixing)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Birthday(benchmark::State& st) {
  const Exec exec = st.range(0) ? Exec::parallel : Exec::serial;
  BirthdayConfig cfg;
  cfg.n = 10000;
  cfg.ell = 300;
  cfg.trials = 20000;
  cfg.seed = 5;
  for (auto _ : st) {
    auto r = birthday_mc(cfg, exec);
    benchmark::DoNotOptimize(r.first);
  }
}
BENCHMARK(BM_Birthday)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
