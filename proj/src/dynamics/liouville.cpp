#include <algorithm>
#include <cmath>

#include "hypgeo/dynamics.hpp"
#include "hypgeo/error.hpp"

namespace hypgeo {

namespace {

constexpr std::size_t kChunk = 4096;

double bounding_radius(const SurfaceGroup& S) { return S.circumradius * (1 + 1e-12); }

double stderr_of(double p, std::size_t n) { return n ? std::sqrt(std::max(0.0, p * (1 - p)) / n) : 0; }

// Runs body(rng, count) on consecutive chunks, each with its own substream.
template <class Acc, class Body>
Acc chunked(std::size_t trials, std::uint64_t seed, Exec exec, const Acc& zero, Body body) {
  const long chunks = static_cast<long>((trials + kChunk - 1) / kChunk);
  std::vector<Acc> parts(chunks, zero);
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
  for (long k = 0; k < chunks; ++k) {
    err.guard([&] {
      auto rng = substream(seed, static_cast<std::uint64_t>(k));
      std::size_t n = std::min(kChunk, trials - static_cast<std::size_t>(k) * kChunk);
      body(rng, n, parts[k]);
    });
  }
  err.rethrow();
  Acc total = zero;
  for (const Acc& p : parts)
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += p[i];
  return total;
}

void check_boxes(const SurfaceGroup& S, const std::vector<const FlowBox*>& boxes) {
  for (const FlowBox* b : boxes) {
    if (b->surface != &S) throw Error(ErrorKind::ConfigError, "flow box belongs to another surface");
    if (b->extent() > chart_radius(S))
      throw Error(ErrorKind::ChartRadiusExceeded, "flow box wider than the lift search radius");
  }
}

}  // namespace

double liouville_acceptance(const SurfaceGroup& S) {
  return S.area / (2 * M_PI * (std::cosh(bounding_radius(S)) - 1));
}

UnitTangent liouville_sample(const SurfaceGroup& S, std::mt19937_64& rng) {
  if (!S.is_polygon_surface()) throw Error(ErrorKind::ConfigError, "sampling needs a polygon surface");
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double ch = std::cosh(bounding_radius(S)) - 1;
  // area-uniform in the circumscribed disc about the center, kept when inside the polygon
  for (;;) {
    double rho = std::acosh(1 + u(rng) * ch);
    double theta = 2 * M_PI * u(rng);
    double phi = 2 * M_PI * u(rng);
    Point z = rotation(theta).apply(Point(0, std::exp(rho)));
    if (S.basepoint != Point(0, 1)) z = frame_at(S.basepoint, 0).frame.apply(z);
    if (in_domain(S, z, 0)) return frame_at(z, phi);
  }
}

MixingCurve mixing_curve(const SurfaceGroup& S, const FlowBox& B1, const FlowBox& B2,
                         const std::vector<double>& t_grid, std::size_t trials, std::uint64_t seed,
                         Exec exec) {
  check_boxes(S, {&B1, &B2});
  if (trials == 0) throw Error(ErrorKind::ConfigError, "mixing needs at least one trial");
  const std::size_t T = t_grid.size();
  // counts: [in B1, in B2, hits per t...]
  std::vector<std::uint64_t> zero(2 + T, 0);
  auto total = chunked(trials, seed, exec, zero, [&](std::mt19937_64& rng, std::size_t n,
                                                     std::vector<std::uint64_t>& acc) {
    for (std::size_t i = 0; i < n; ++i) {
      UnitTangent v = liouville_sample(S, rng);
      bool in1 = box_contains_reduced(B1, v);
      acc[0] += in1;
      acc[1] += box_contains_reduced(B2, v);
      if (!in1) continue;
      for (std::size_t j = 0; j < T; ++j) {
        UnitTangent w = reduce_tangent(S, apply_flow(v, FlowKind::geodesic, t_grid[j]));
        acc[2 + j] += box_contains_reduced(B2, w);
      }
    }
  });
  MixingCurve out;
  out.mu1 = static_cast<double>(total[0]) / trials;
  out.mu2 = static_cast<double>(total[1]) / trials;
  out.stderr1 = stderr_of(out.mu1, trials);
  out.stderr2 = stderr_of(out.mu2, trials);
  const double prod = out.mu1 * out.mu2;
  std::vector<double> xs, ys;
  for (std::size_t j = 0; j < T; ++j) {
    MixingEstimate m;
    m.t = t_grid[j];
    m.trials = trials;
    m.estimate = static_cast<double>(total[2 + j]) / trials;
    m.stderr_ = stderr_of(m.estimate, trials);
    out.points.push_back(m);
    double dev = std::abs(m.estimate - prod);
    if (dev > 0) {
      xs.push_back(m.t);
      ys.push_back(std::log(dev));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= xs.size();
    my /= xs.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx > 0)
      for (auto& m : out.points) m.kappa_fit = -sxy / sxx;
  }
  return out;
}

MixingEstimate multi_mixing(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                            const std::vector<double>& times, std::size_t trials, std::uint64_t seed,
                            Exec exec) {
  if (boxes.size() != times.size() || boxes.empty())
    throw Error(ErrorKind::ConfigError, "one time per box required");
  std::vector<const FlowBox*> ptrs;
  for (const auto& b : boxes) ptrs.push_back(&b);
  check_boxes(S, ptrs);
  std::vector<std::uint64_t> zero(1, 0);
  auto total = chunked(trials, seed, exec, zero, [&](std::mt19937_64& rng, std::size_t n,
                                                     std::vector<std::uint64_t>& acc) {
    for (std::size_t i = 0; i < n; ++i) {
      UnitTangent v = liouville_sample(S, rng);
      bool all = true;
      for (std::size_t k = 0; k < boxes.size() && all; ++k) {
        UnitTangent w = times[k] == 0 ? v : reduce_tangent(S, apply_flow(v, FlowKind::geodesic, times[k]));
        all = box_contains_reduced(boxes[k], w);
      }
      acc[0] += all;
    }
  });
  MixingEstimate m;
  m.t = times.back();
  m.trials = trials;
  m.estimate = static_cast<double>(total[0]) / trials;
  m.stderr_ = stderr_of(m.estimate, trials);
  return m;
}

std::pair<double, double> union_mass(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                                     std::size_t trials, std::uint64_t seed, Exec exec) {
  std::vector<const FlowBox*> ptrs;
  for (const auto& b : boxes) ptrs.push_back(&b);
  check_boxes(S, ptrs);
  std::vector<std::uint64_t> zero(1, 0);
  auto total = chunked(trials, seed, exec, zero, [&](std::mt19937_64& rng, std::size_t n,
                                                     std::vector<std::uint64_t>& acc) {
    for (std::size_t i = 0; i < n; ++i) {
      UnitTangent v = liouville_sample(S, rng);
      for (const FlowBox& b : boxes)
        if (box_contains_reduced(b, v)) {
          ++acc[0];
          break;
        }
    }
  });
  double p = static_cast<double>(total[0]) / trials;
  return {p, stderr_of(p, trials)};
}

}  // namespace hypgeo
