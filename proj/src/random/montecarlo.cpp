#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "hypgeo/error.hpp"
#include "hypgeo/random_models.hpp"

namespace hypgeo {

namespace {

constexpr std::size_t kChunk = 1024;

// Per-thread scratch: arrays indexed by object, valid only where stamp == current trial.
struct Stamped {
  std::vector<std::uint32_t> stamp;
  std::vector<std::uint32_t> count;
  std::uint32_t now = 0;
  explicit Stamped(std::size_t n) : stamp(n, 0), count(n, 0) {}
  void next() {
    if (++now == 0) {
      std::fill(stamp.begin(), stamp.end(), 0);
      now = 1;
    }
  }
  std::uint32_t get(std::size_t x) const { return stamp[x] == now ? count[x] : 0; }
  std::uint32_t bump(std::size_t x) {
    if (stamp[x] != now) {
      stamp[x] = now;
      count[x] = 0;
    }
    return ++count[x];
  }
};

}  // namespace

std::int64_t good_count(const BirthdayConfig& cfg) {
  return static_cast<std::int64_t>(std::ceil(cfg.alpha * static_cast<double>(cfg.n) - 1e-9));
}

std::int64_t transverse_image(const BirthdayConfig& cfg, std::int64_t x) {
  switch (cfg.transverse) {
    case TransverseKind::identity: return x;
    case TransverseKind::shift: return ((x + cfg.shift) % cfg.n + cfg.n) % cfg.n;
    case TransverseKind::table: return cfg.table[x];
  }
  return x;
}

void validate(const BirthdayConfig& cfg) {
  if (cfg.n < 1 || cfg.ell < 1) throw Error(ErrorKind::ConfigError, "birthday needs n, ell >= 1");
  if (!(cfg.alpha > 0 && cfg.alpha <= 1)) throw Error(ErrorKind::ConfigError, "alpha must lie in (0, 1]");
  if (cfg.n > (1LL << 31)) throw Error(ErrorKind::ConfigError, "object count too large");
  const std::int64_t g = good_count(cfg);
  if (cfg.transverse == TransverseKind::table) {
    if (static_cast<std::int64_t>(cfg.table.size()) != g)
      throw Error(ErrorKind::ConfigError, "transverse table must list one image per good object");
    std::vector<char> hit(cfg.n, 0);
    for (std::int64_t y : cfg.table) {
      if (y < 0 || y >= cfg.n) throw Error(ErrorKind::ConfigError, "transverse image outside the objects");
      if (hit[y]) throw Error(ErrorKind::ConfigError, "transverse map is not injective");
      hit[y] = 1;
    }
  }
  if (cfg.transverse == TransverseKind::shift && g > 0 && cfg.n > 1 && g > cfg.n)
    throw Error(ErrorKind::ConfigError, "shift map is not injective");
}

std::pair<double, double> birthday_mc(const BirthdayConfig& cfg, Exec exec) {
  validate(cfg);
  if (cfg.trials == 0) throw Error(ErrorKind::ConfigError, "birthday needs trials >= 1");
  const std::int64_t g = good_count(cfg);
  const long chunks = static_cast<long>((cfg.trials + kChunk - 1) / kChunk);
  std::vector<std::uint64_t> misses(chunks, 0);
#pragma omp parallel if (exec == Exec::parallel)
  {
    Stamped seen(static_cast<std::size_t>(cfg.n));
    std::vector<std::int64_t> x(cfg.ell);
#pragma omp for schedule(dynamic, 1)
    for (long k = 0; k < chunks; ++k) {
      auto rng = substream(cfg.seed, static_cast<std::uint64_t>(k));
      std::uniform_int_distribution<std::int64_t> pick(0, cfg.n - 1);
      const std::size_t n = std::min(kChunk, cfg.trials - static_cast<std::size_t>(k) * kChunk);
      for (std::size_t t = 0; t < n; ++t) {
        seen.next();
        for (auto& v : x) {
          v = pick(rng);
          seen.bump(v);
        }
        bool detected = false;
        for (std::int64_t v : x) {
          if (v >= g) continue;
          const std::int64_t y = transverse_image(cfg, v);
          const std::uint32_t c = seen.get(y);
          if (y != v ? c > 0 : (cfg.allow_same_index ? c > 0 : c > 1)) {
            detected = true;
            break;
          }
        }
        misses[k] += !detected;
      }
    }
  }
  std::uint64_t total = 0;
  for (auto m : misses) total += m;
  const double p = static_cast<double>(total) / cfg.trials;
  return {p, std::sqrt(p * (1 - p) / cfg.trials)};
}

std::pair<double, double> coupon_collector_mc(std::int64_t n, std::size_t trials, std::uint64_t seed,
                                              Exec exec) {
  if (n < 1 || trials == 0) throw Error(ErrorKind::ConfigError, "coupon collector needs n, trials >= 1");
  const long chunks = static_cast<long>((trials + kChunk - 1) / kChunk);
  std::vector<double> sum(chunks, 0), sum2(chunks, 0);
#pragma omp parallel if (exec == Exec::parallel)
  {
    Stamped seen(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 1)
    for (long k = 0; k < chunks; ++k) {
      auto rng = substream(seed, static_cast<std::uint64_t>(k));
      std::uniform_int_distribution<std::int64_t> pick(0, n - 1);
      const std::size_t m = std::min(kChunk, trials - static_cast<std::size_t>(k) * kChunk);
      for (std::size_t t = 0; t < m; ++t) {
        seen.next();
        std::int64_t distinct = 0, draws = 0;
        while (distinct < n) {
          ++draws;
          if (seen.bump(pick(rng)) == 1) ++distinct;
        }
        sum[k] += draws;
        sum2[k] += static_cast<double>(draws) * draws;
      }
    }
  }
  double s = 0, s2 = 0;
  for (long k = 0; k < chunks; ++k) s += sum[k], s2 += sum2[k];
  const double mean = s / trials;
  const double var = trials > 1 ? std::max(0.0, (s2 - trials * mean * mean) / (trials - 1)) : 0;
  return {mean, std::sqrt(var / trials)};
}

}  // namespace hypgeo
