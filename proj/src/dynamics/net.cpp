#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "hypgeo/dynamics.hpp"
#include "hypgeo/error.hpp"

namespace hypgeo {

namespace {

// Poincaré disk centered at the polygon center.
struct Disk {
  Mat2 to_i, from_i;
  explicit Disk(Point o) : from_i(frame_at(o, 0).frame) { to_i = from_i.inverse(); }
  Point to_disk(Point z) const {
    Point u = to_i.apply(z);
    return (u - Point(0, 1)) / (u + Point(0, 1));
  }
  Point from_disk(Point w) const { return from_i.apply(Point(0, 1) * (1.0 + w) / (1.0 - w)); }
};

struct Circle {
  Point c;
  double r2;
};

Circle circumcircle(Point a, Point b, Point c) {
  double ax = a.real(), ay = a.imag(), bx = b.real(), by = b.imag(), cx = c.real(), cy = c.imag();
  double d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
  if (d == 0) return {Point(0, 0), 1e300};
  double a2 = ax * ax + ay * ay, b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
  Point o((a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d,
          (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d);
  return {o, std::norm(a - o)};
}

struct Tri {
  int v[3];
  Circle cc;
};

// Bowyer–Watson on points strictly inside the unit disk.
std::vector<std::array<int, 3>> delaunay(const std::vector<Point>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<Point> P = pts;
  P.push_back({-30, -30});
  P.push_back({30, -30});
  P.push_back({0, 30});
  std::vector<Tri> tris{{{n, n + 1, n + 2}, circumcircle(P[n], P[n + 1], P[n + 2])}};
  for (int i = 0; i < n; ++i) {
    const Point p = P[i];
    std::vector<std::array<int, 2>> edges;
    std::vector<Tri> keep;
    keep.reserve(tris.size() + 2);
    for (const Tri& t : tris) {
      if (std::norm(p - t.cc.c) < t.cc.r2) {
        for (int k = 0; k < 3; ++k) edges.push_back({t.v[k], t.v[(k + 1) % 3]});
      } else {
        keep.push_back(t);
      }
    }
    std::vector<char> dup(edges.size(), 0);
    for (std::size_t a = 0; a < edges.size(); ++a)
      for (std::size_t b = a + 1; b < edges.size(); ++b)
        if (edges[a][0] == edges[b][1] && edges[a][1] == edges[b][0]) dup[a] = dup[b] = 1;
    for (std::size_t a = 0; a < edges.size(); ++a) {
      if (dup[a]) continue;
      Tri t{{edges[a][0], edges[a][1], i}, circumcircle(P[edges[a][0]], P[edges[a][1]], p)};
      keep.push_back(t);
    }
    tris.swap(keep);
  }
  std::vector<std::array<int, 3>> out;
  for (const Tri& t : tris)
    if (t.v[0] < n && t.v[1] < n && t.v[2] < n) out.push_back({t.v[0], t.v[1], t.v[2]});
  return out;
}

// Hyperbolic center and radius of a Euclidean circle inside the disk; false if it leaves it.
bool hyperbolic_circle(const Circle& c, Point& center, double& radius) {
  double rho = std::sqrt(c.r2), m = std::abs(c.c);
  if (m + rho >= 1) return false;
  double d1 = 2 * std::atanh(m - rho), d2 = 2 * std::atanh(m + rho);
  double mid = 0.5 * (d1 + d2);
  center = m > 0 ? c.c / m * std::tanh(0.5 * mid) : Point(0, 0);
  radius = 0.5 * (d2 - d1);
  return true;
}

// Unit tangent at the midpoint of the segment a→b, pointing toward b.
UnitTangent midpoint_tangent(Point a, Point b) {
  const Mat2 f = line_frame(line_through(a, b));
  const Mat2 fi = f.inverse();
  double ya = fi.apply(a).imag(), yb = fi.apply(b).imag();
  return {f * flow_matrix(FlowKind::geodesic, 0.5 * std::log(ya * yb))};
}

double angle_at(double opposite, double s1, double s2) {
  double c = (std::cosh(s1) * std::cosh(s2) - std::cosh(opposite)) / (std::sinh(s1) * std::sinh(s2));
  return std::acos(std::clamp(c, -1.0, 1.0));
}

double min_displacement(Point p, const std::vector<Mat2>& elements) {
  double best = 1e300;
  for (const Mat2& g : elements) {
    if (is_identity_psl(g, 1e-9)) continue;
    best = std::min(best, cosh_distance(p, g.apply(p)));
  }
  return std::acosh(std::max(1.0, best));
}

std::vector<Point> polar_grid(const SurfaceGroup& S, double step, double rmax) {
  std::vector<Point> out;
  const Mat2 f = frame_at(S.basepoint, 0).frame;
  for (int k = 0; k * step <= rmax; ++k) {
    double rho = k * step;
    int m = k == 0 ? 1 : static_cast<int>(std::ceil(2 * M_PI * std::sinh(rho) / step));
    for (int j = 0; j < m; ++j) out.push_back(f.apply(rotation(2 * M_PI * j / m).apply(Point(0, std::exp(rho)))));
  }
  return out;
}

double nearest_center(const SurfaceGroup& S, Point z, const std::vector<Point>& centers) {
  double best = 1e300;
  for (const Point& c : centers) best = std::min(best, surface_distance(S, z, c));
  return best;
}

std::vector<Point> greedy_packing(const SurfaceGroup& S, double r, double step) {
  std::vector<Point> seeds;
  for (const Point& z : polar_grid(S, step, S.circumradius))
    if (in_domain(S, z, 1e-12)) seeds.push_back(z);
  const double sep = 2 * r * (1 + 1e-5);
  std::vector<Point> centers;
  for (const Point& z : seeds)
    if (nearest_center(S, z, centers) >= sep) centers.push_back(z);
  return centers;
}

}  // namespace

double injectivity_radius(const SurfaceGroup&, Point p, const std::vector<Mat2>& elements) {
  return 0.5 * min_displacement(p, elements);
}

std::pair<Point, double> embedded_disc_center(const SurfaceGroup& S, double grid_step) {
  if (!S.is_polygon_surface()) throw Error(ErrorKind::ConfigError, "disc search needs a polygon surface");
  if (!(grid_step > 0)) throw Error(ErrorKind::ConfigError, "grid step must be positive");
  // a side pairing displaces p by at most 2 d(o,p) + 2 inradius
  const double R = S.circumradius;
  auto ball = collect_ball(S, 4 * R + 2 * S.inradius + 1e-6, Exec::serial);
  std::sort(ball.begin(), ball.end(),
            [](const BallElement& x, const BallElement& y) { return x.displacement < y.displacement; });
  Point best_p = S.basepoint;
  double best = -1;
  for (const Point& p : polar_grid(S, grid_step, R)) {
    if (!in_domain(S, p, 1e-12)) continue;
    const double dop = hyp_distance(S.basepoint, p);
    double m = 1e300;
    for (const BallElement& e : ball) {
      if (e.displacement > m + 2 * dop) break;
      if (is_identity_psl(e.element, 1e-9)) continue;
      m = std::min(m, hyp_distance(p, e.element.apply(p)));
    }
    if (0.5 * m > best + 1e-12) {
      best = 0.5 * m;
      best_p = p;
    }
  }
  return {best_p, best};
}

DelaunayNet build_delaunay_net(const SurfaceGroup& S, double r, double box_fraction) {
  if (!S.is_polygon_surface()) throw Error(ErrorKind::ConfigError, "nets need a polygon surface");
  if (!(r > 0)) throw Error(ErrorKind::ConfigError, "net radius must be positive");
  const double R = S.circumradius;
  const Disk disk(S.basepoint);

  std::vector<Point> centers;
  std::mt19937_64 probe_rng(0x6e6574);
  std::vector<Point> probes;
  for (int i = 0; i < 2000; ++i) probes.push_back(liouville_sample(S, probe_rng).base());
  for (double step = r / 3;; step /= 2) {
    centers = greedy_packing(S, r, step);
    bool covered = true;
    for (const Point& z : probes)
      if (nearest_center(S, z, centers) > 3 * r) { covered = false; break; }
    if (covered) break;
    if (step < r / 100) throw Error(ErrorKind::PackingFailure, "3r-discs do not cover the surface");
  }

  const double lift_radius = R + 6 * r + 1e-6;
  auto ball = collect_ball(S, 2 * R + 6 * r + 1e-6, Exec::serial);

  DelaunayNet net;
  net.r = r;
  std::mt19937_64 jitter(0x64656c61);
  for (int attempt = 0;; ++attempt) {
    if (attempt > 50) throw Error(ErrorKind::PackingFailure, "degenerate Delaunay cells persist");
    std::vector<Point> lifts, lifts_disk;
    std::vector<int> owner;
    for (std::size_t i = 0; i < centers.size(); ++i)
      for (const BallElement& e : ball) {
        Point q = e.element.apply(centers[i]);
        if (hyp_distance(S.basepoint, q) > lift_radius) continue;
        lifts.push_back(q);
        lifts_disk.push_back(disk.to_disk(q));
        owner.push_back(static_cast<int>(i));
      }
    auto tris = delaunay(lifts_disk);

    struct Kept {
      std::array<int, 3> v;
      Point center;
    };
    std::vector<Kept> kept;
    bool degenerate = false;
    for (const auto& t : tris) {
      Circle cc = circumcircle(lifts_disk[t[0]], lifts_disk[t[1]], lifts_disk[t[2]]);
      Point hc;
      double hr;
      if (!hyperbolic_circle(cc, hc, hr)) continue;
      Point z = disk.from_disk(hc);
      if (!in_domain(S, z, 1e-9)) continue;
      double rho = std::sqrt(cc.r2);
      for (std::size_t q = 0; q < lifts_disk.size() && !degenerate; ++q) {
        if (static_cast<int>(q) == t[0] || static_cast<int>(q) == t[1] || static_cast<int>(q) == t[2]) continue;
        if (std::abs(std::abs(lifts_disk[q] - cc.c) - rho) < 1e-10) degenerate = true;
      }
      if (degenerate) break;
      Point zr = reduce_point(S, z).point;
      bool dup = false;
      for (const Kept& k : kept)
        if (surface_distance(S, k.center, zr) < 1e-7) { dup = true; break; }
      if (!dup) kept.push_back({t, zr});
    }
    if (degenerate) {
      std::uniform_real_distribution<double> u(0, 1);
      for (Point& c : centers) {
        UnitTangent v = frame_at(c, 2 * M_PI * u(jitter));
        c = reduce_point(S, apply_flow(v, FlowKind::geodesic, r * 1e-6 * u(jitter)).base()).point;
      }
      ++net.perturbations;
      continue;
    }

    net.centers = centers;
    for (const Kept& k : kept) {
      net.triangles.push_back({owner[k.v[0]], owner[k.v[1]], owner[k.v[2]]});
      net.triangle_lifts.push_back({lifts[k.v[0]], lifts[k.v[1]], lifts[k.v[2]]});
      for (int e = 0; e < 3; ++e) {
        int a = k.v[e], b = k.v[(e + 1) % 3];
        Point mid = reduce_point(S, midpoint_tangent(lifts[a], lifts[b]).base()).point;
        bool dup = false;
        for (const auto& ed : net.edges)
          if (surface_distance(S, reduce_point(S, midpoint_tangent(ed.pa, ed.pb).base()).point, mid) < 1e-7) {
            dup = true;
            break;
          }
        if (dup) continue;
        net.edges.push_back({owner[a], owner[b], lifts[a], lifts[b], hyp_distance(lifts[a], lifts[b])});
      }
    }
    break;
  }

  std::vector<int> degree(net.centers.size(), 0);
  for (const auto& e : net.edges) {
    ++degree[e.a];
    ++degree[e.b];
    net.edge_boxes.push_back(make_box(S, midpoint_tangent(e.pa, e.pb), box_fraction * r));
  }
  net.max_degree = degree.empty() ? 0 : *std::max_element(degree.begin(), degree.end());
  // neighbours lie within 6r and their r-discs are disjoint inside the 7r-disc
  net.degree_bound = (std::cosh(7 * r) - 1) / (std::cosh(r) - 1);
  net.edge_constant = static_cast<double>(net.edges.size()) / S.genus;
  return net;
}

NetCheck check_net(const SurfaceGroup& S, const DelaunayNet& net, std::size_t coverage_samples,
                   std::uint64_t seed) {
  NetCheck out;
  const double r = net.r;
  out.min_edge = 1e300;
  for (const auto& e : net.edges) {
    out.min_edge = std::min(out.min_edge, e.length);
    out.max_edge = std::max(out.max_edge, e.length);
    if (e.length < 2 * r * (1 - 1e-9) || e.length > 6 * r * (1 + 1e-9)) ++out.edge_violations;
  }
  for (const auto& t : net.triangle_lifts) {
    double a = hyp_distance(t[1], t[2]), b = hyp_distance(t[0], t[2]), c = hyp_distance(t[0], t[1]);
    for (double ang : {angle_at(a, b, c), angle_at(b, a, c), angle_at(c, a, b)}) {
      double deg = ang * 180 / M_PI;
      out.max_angle_deg = std::max(out.max_angle_deg, deg);
      if (deg > 150 + 1e-9) ++out.angle_violations;
    }
  }
  for (std::size_t i = 0; i < net.centers.size(); ++i) {
    if (min_displacement(net.centers[i], S.local_elements) < 2 * r) ++out.disjointness_violations;
    for (std::size_t j = i + 1; j < net.centers.size(); ++j)
      if (surface_distance(S, net.centers[i], net.centers[j]) < 2 * r) ++out.disjointness_violations;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < coverage_samples; ++k) {
    Point z = liouville_sample(S, rng).base();
    if (nearest_center(S, z, net.centers) > 3 * r) ++out.coverage_violations;
  }
  out.euler_characteristic = static_cast<int>(net.centers.size()) - static_cast<int>(net.edges.size()) +
                             static_cast<int>(net.triangles.size());
  return out;
}

bool passes_net_filter(const SurfaceGroup& S, const std::vector<ChordRep>& chords, const DelaunayNet& net) {
  for (const FlowBox& b : net.edge_boxes)
    if (!geodesic_meets_box(S, chords, b)) return false;
  return !net.edge_boxes.empty();
}

}  // namespace hypgeo
