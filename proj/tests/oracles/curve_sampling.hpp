#pragma once

// Sampling oracles for curve topology: the projected geodesic is traced as a dense polyline
// in the fundamental polygon (drawn in the disk model around the basepoint), then
//  - self-intersections are counted as crossings between polyline segments;
//  - the polygon is rasterized, pixels near the curve are removed, and the remaining
//    pixels are joined across paired sides to count complementary components.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "hypgeo/surface.hpp"

namespace oracle {

using hypgeo::Mat2;
using hypgeo::Point;

inline Point to_disk(Point z) { return (z - Point(0, 1)) / (z + Point(0, 1)); }
inline Point from_disk(Point w) { return Point(0, 1) * (1.0 + w) / (1.0 - w); }

// Pieces overhang their tile by one sample on each side, so segments straddling a side are
// present in both tiles.
struct Polyline {
  std::vector<std::vector<Point>> pieces;  // disk coordinates, one piece per tile visit
  std::size_t segments = 0;
};

// One period of the closed geodesic with hyperbolic element g, sampled every `step`.
inline Polyline trace_curve(const hypgeo::SurfaceGroup& S, const Mat2& g, double step) {
  const double ell = hypgeo::trace_to_length(std::abs(g.trace()));
  const Mat2 f = hypgeo::line_frame(hypgeo::axis(g));
  const int n = static_cast<int>(std::ceil(ell / step));
  Polyline out;
  Mat2 prev;
  Point zprev;
  for (int k = 0; k <= n; ++k) {
    Point z = f.apply(Point(0, std::exp(ell * k / n)));
    hypgeo::Reduction r = hypgeo::reduce_point(S, z);
    bool same_tile = k > 0 && hypgeo::psl_distance(r.element.canonical(), prev.canonical()) < 1e-6;
    if (!same_tile) {
      if (k > 0) out.pieces.back().push_back(to_disk(prev.apply(z)));
      out.pieces.emplace_back();
      if (k > 0) out.pieces.back().push_back(to_disk(r.element.apply(zprev)));
    }
    out.pieces.back().push_back(to_disk(r.point));
    prev = r.element;
    zprev = z;
  }
  for (const auto& p : out.pieces) out.segments += p.size() - 1;
  return out;
}

namespace detail {

inline double cross(Point a, Point b, Point c) {
  return (b.real() - a.real()) * (c.imag() - a.imag()) - (b.imag() - a.imag()) * (c.real() - a.real());
}

inline bool segments_cross(Point a, Point b, Point c, Point d, Point* at) {
  double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
  if (((d1 > 0) == (d2 > 0)) || ((d3 > 0) == (d4 > 0))) return false;
  *at = c + (d - c) * (d1 / (d1 - d2));
  return true;
}

}  // namespace detail

// Number of distinct points of the closed polygon where two non-adjacent segments cross;
// copies of one point on paired sides are merged.
inline int count_crossings(const hypgeo::SurfaceGroup& S, const Polyline& P) {
  struct Seg {
    Point a, b;
    std::size_t piece, index;
  };
  std::vector<Seg> segs;
  for (std::size_t i = 0; i < P.pieces.size(); ++i)
    for (std::size_t k = 0; k + 1 < P.pieces[i].size(); ++k) segs.push_back({P.pieces[i][k], P.pieces[i][k + 1], i, k});
  const double cell = 0.01;
  auto cell_of = [&](double x) { return static_cast<long>(std::floor(x / cell)); };
  std::unordered_map<long, std::vector<std::size_t>> grid;
  auto key = [](long x, long y) { return x * 100003 + y; };
  for (std::size_t s = 0; s < segs.size(); ++s) {
    const Seg& q = segs[s];
    for (long x = cell_of(std::min(q.a.real(), q.b.real())); x <= cell_of(std::max(q.a.real(), q.b.real())); ++x)
      for (long y = cell_of(std::min(q.a.imag(), q.b.imag())); y <= cell_of(std::max(q.a.imag(), q.b.imag())); ++y)
        grid[key(x, y)].push_back(s);
  }
  std::vector<Point> found;
  for (const auto& [k, list] : grid)
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        const Seg &p = segs[list[i]], &q = segs[list[j]];
        if (p.piece == q.piece && (p.index + 1 == q.index || q.index + 1 == p.index)) continue;
        Point at;
        if (!detail::segments_cross(p.a, p.b, q.a, q.b, &at)) continue;
        Point z = from_disk(at);
        // chords sag off the arcs by about step², so points on a side may land slightly outside
        if (hypgeo::max_side_distance(S, z) > 1e-5) continue;
        bool dup = false;
        for (Point w : found) {
          if (hypgeo::hyp_distance(z, w) < 1e-6) dup = true;
          for (const Mat2& g : S.neighbors)
            if (!dup && hypgeo::hyp_distance(g.apply(z), w) < 1e-6) dup = true;
          if (dup) break;
        }
        if (!dup) found.push_back(z);
      }
  return static_cast<int>(found.size());
}

// Components of the polygon minus a band of one pixel around the curve, with pixels
// joined across paired sides.
inline int complement_components(const hypgeo::SurfaceGroup& S, const Polyline& P, double h) {
  double R = 0;
  for (Point v : S.domain.vertices) R = std::max(R, std::abs(to_disk(v)));
  const int N = static_cast<int>(std::ceil(2 * R / h)) + 2;
  auto center = [&](int ix, int iy) { return Point(-R + (ix + 0.5) * h, -R + (iy + 0.5) * h); };
  auto index = [&](int ix, int iy) { return static_cast<std::size_t>(iy) * N + ix; };
  std::vector<char> state(static_cast<std::size_t>(N) * N, 0);  // 0 outside, 1 free, 2 blocked
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix)
      if (hypgeo::in_domain(S, from_disk(center(ix, iy)), 0)) state[index(ix, iy)] = 1;
  for (const auto& piece : P.pieces)
    for (std::size_t k = 0; k + 1 < piece.size(); ++k) {
      Point a = piece[k], b = piece[k + 1];
      int x0 = static_cast<int>(std::floor((std::min(a.real(), b.real()) - h + R) / h));
      int x1 = static_cast<int>(std::floor((std::max(a.real(), b.real()) + h + R) / h));
      int y0 = static_cast<int>(std::floor((std::min(a.imag(), b.imag()) - h + R) / h));
      int y1 = static_cast<int>(std::floor((std::max(a.imag(), b.imag()) + h + R) / h));
      for (int iy = std::max(0, y0); iy <= std::min(N - 1, y1); ++iy)
        for (int ix = std::max(0, x0); ix <= std::min(N - 1, x1); ++ix) {
          Point c = center(ix, iy);
          Point ab = b - a;
          double t = std::clamp(std::real((c - a) * std::conj(ab)) / std::max(std::norm(ab), 1e-300), 0.0, 1.0);
          if (std::abs(c - (a + t * ab)) <= h && state[index(ix, iy)] == 1) state[index(ix, iy)] = 2;
        }
    }
  std::vector<std::size_t> parent(state.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[find(a)] = find(b); };
  const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
  for (int iy = 0; iy < N; ++iy)
    for (int ix = 0; ix < N; ++ix) {
      if (state[index(ix, iy)] != 1) continue;
      for (int d = 0; d < 4; ++d) {
        int jx = ix + dx[d], jy = iy + dy[d];
        if (jx < 0 || jy < 0 || jx >= N || jy >= N) continue;
        char s = state[index(jx, jy)];
        if (s == 1) {
          unite(index(ix, iy), index(jx, jy));
        } else if (s == 0) {
          // the free pixel nearest to the image of the neighbour across the side
          Point w = to_disk(hypgeo::reduce_point(S, from_disk(center(jx, jy))).point);
          int kx = static_cast<int>(std::floor((w.real() + R) / h)), ky = static_cast<int>(std::floor((w.imag() + R) / h));
          double best = 1.5 * h;
          std::size_t pick = state.size();
          for (int ey = ky - 1; ey <= ky + 1; ++ey)
            for (int ex = kx - 1; ex <= kx + 1; ++ex) {
              if (ex < 0 || ey < 0 || ex >= N || ey >= N || state[index(ex, ey)] != 1) continue;
              double dist = std::abs(center(ex, ey) - w);
              if (dist < best) best = dist, pick = index(ex, ey);
            }
          if (pick < state.size()) unite(index(ix, iy), pick);
        }
      }
    }
  int comps = 0;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] == 1 && find(i) == i) ++comps;
  return comps;
}

}  // namespace oracle
