#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "hypgeo/error.hpp"
#include "hypgeo/surface.hpp"
#include "internal.hpp"

namespace hypgeo {

namespace {

Mat2 side_frame(double phi, double inradius) {
  return rotation(phi) * flow_matrix(FlowKind::geodesic, inradius);
}

std::vector<int> partner_sides(int n, PairingScheme scheme) {
  std::vector<int> p(n);
  for (int s = 0; s < n; ++s) {
    if (scheme == PairingScheme::opposite) {
      p[s] = (s + n / 2) % n;
    } else {
      int block = s / 4, r = s % 4;
      p[s] = 4 * block + (r + 2) % 4;
    }
  }
  return p;
}

double triangle_area(Point p, Point q, Point r) {
  double a = hyp_distance(q, r), b = hyp_distance(p, r), c = hyp_distance(p, q);
  auto angle = [](double opp, double s1, double s2) {
    double v = (std::cosh(s1) * std::cosh(s2) - std::cosh(opp)) / (std::sinh(s1) * std::sinh(s2));
    return std::acos(std::clamp(v, -1.0, 1.0));
  };
  return std::numbers::pi - angle(a, b, c) - angle(b, a, c) - angle(c, a, b);
}

}  // namespace

namespace detail {

VertexWalk walk_vertex(const SurfaceGroup& S, int k0) {
  const int n = S.sides();
  const auto& V = S.domain.vertices;
  VertexWalk w;
  Mat2 T = Mat2::identity();
  int k = k0, s = k0;
  for (int step = 0; step < 4 * n; ++step) {
    const Mat2& h = S.side_transforms[s];
    int ps = S.domain.side_pairing[s];
    int j = -1;
    for (int cand : {ps, (ps + 1) % n}) {
      if (hyp_distance(h.apply(V[cand]), V[k]) < 1e-7) j = cand;
    }
    if (j < 0) throw Error(ErrorKind::RelatorViolation, "side pairing does not match vertices");
    T = T * h;
    w.sides.push_back(s);
    w.vertices.push_back(j);
    w.tiles.push_back(T);
    k = j;
    s = (j == ps) ? (j + n - 1) % n : j;
    if (k == k0 && s == k0 && is_identity_psl(T, 1e-7)) return w;
  }
  throw Error(ErrorKind::RelatorViolation, "vertex cycle does not close");
}

std::vector<Mat2> small_ball(const SurfaceGroup& S, double radius) {
  const Point o = S.basepoint;
  std::vector<Mat2> out{Mat2::identity()};
  std::vector<Point> orbit{o};
  std::unordered_map<long long, std::vector<int>> bucket;
  const double h = 0.01;
  bucket[0].push_back(0);
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int idx : frontier) {
      for (const Mat2& hs : S.side_transforms) {
        Mat2 g = out[idx] * hs;
        Point z = g.apply(o);
        double d = hyp_distance(o, z);
        if (d > radius + 1e-9) continue;
        long long kz = static_cast<long long>(std::floor(d / h));
        bool dup = false;
        for (long long kk = kz - 1; kk <= kz + 1 && !dup; ++kk) {
          auto it = bucket.find(kk);
          if (it == bucket.end()) continue;
          for (int j : it->second)
            if (hyp_distance(orbit[j], z) < 1e-6) { dup = true; break; }
        }
        if (dup) continue;
        int id = static_cast<int>(out.size());
        out.push_back(g);
        orbit.push_back(z);
        bucket[kz].push_back(id);
        next.push_back(id);
      }
    }
    frontier.swap(next);
  }
  return out;
}

void finalize_polygon_surface(SurfaceGroup& S) {
  const int n = S.sides();
  const auto& V = S.domain.vertices;
  if (n < 4 || n % 2) throw Error(ErrorKind::ConfigError, "polygon needs an even number >= 4 of sides");
  for (int s = 0; s < n; ++s) {
    int p = S.domain.side_pairing[s];
    if (p == s || S.domain.side_pairing[p] != s)
      throw Error(ErrorKind::ConfigError, "side pairing is not a fixed-point-free involution");
  }
  S.side_transforms.assign(n, Mat2::identity());
  S.side_frames_inv.assign(n, Mat2::identity());
  for (int s = 0; s < n; ++s) {
    int x = S.domain.side_letter[s];
    const Mat2& g = S.generators.at(std::abs(x) - 1);
    S.side_transforms[s] = x > 0 ? g : g.inverse();
    S.side_frames_inv[s] = line_frame(line_through(V[s], V[(s + 1) % n])).inverse();
  }
  for (int s = 0; s < n; ++s) {
    int p = S.domain.side_pairing[s];
    const Mat2& h = S.side_transforms[s];
    // h_s carries side p(s) onto side s, reversing its direction
    double e1 = hyp_distance(h.apply(V[p]), V[(s + 1) % n]);
    double e2 = hyp_distance(h.apply(V[(p + 1) % n]), V[s]);
    if (std::max(e1, e2) > 1e-8) throw Error(ErrorKind::RelatorViolation, "side pairing mismatch");
  }
  S.vertex_cycle_rep.assign(n, -1);
  for (int k = 0; k < n; ++k) {
    if (S.vertex_cycle_rep[k] >= 0) continue;
    auto w = walk_vertex(S, k);
    int rep = *std::min_element(w.vertices.begin(), w.vertices.end());
    for (int v : w.vertices) S.vertex_cycle_rep[v] = rep;
  }
  S.circumradius = 0;
  S.diameter = 0;
  for (int i = 0; i < n; ++i) {
    S.circumradius = std::max(S.circumradius, hyp_distance(S.basepoint, V[i]));
    for (int j = i + 1; j < n; ++j) S.diameter = std::max(S.diameter, hyp_distance(V[i], V[j]));
  }
  S.inradius = 1e300;
  for (int s = 0; s < n; ++s)
    S.inradius = std::min(S.inradius, -signed_distance_framed(S.side_frames_inv[s], S.basepoint));
  S.area = 0;
  for (int i = 0; i < n; ++i) S.area += triangle_area(S.basepoint, V[i], V[(i + 1) % n]);
  S.local_elements = small_ball(S, 2 * S.circumradius + 3);
  S.neighbors.clear();
  for (const Mat2& g : S.local_elements)
    if (!is_identity_psl(g, 1e-9) && hyp_distance(S.basepoint, g.apply(S.basepoint)) <= 2 * S.circumradius + 1e-6)
      S.neighbors.push_back(g);
}

}  // namespace detail

SurfaceGroup build_regular_surface(int genus, PairingScheme scheme) {
  if (genus < 2) throw Error(ErrorKind::ConfigError, "genus must be >= 2");
  const int n = 4 * genus;
  const double pi = std::numbers::pi;
  const double cot = 1.0 / std::tan(pi / n);
  // vertex angle 2π/n: cosh R = cot²(π/n), cosh r = cot(π/n)
  const double R = std::acosh(cot * cot);
  const double rin = std::acosh(cot);

  SurfaceGroup S;
  S.genus = genus;
  S.scheme = scheme;
  S.basepoint = Point(0, 1);
  for (int k = 0; k < n; ++k)
    S.domain.vertices.push_back(rotation(2 * pi * k / n).apply(Point(0, std::exp(R))));
  S.domain.side_pairing = partner_sides(n, scheme);
  S.domain.side_letter.assign(n, 0);
  std::vector<Mat2> frames;
  for (int k = 0; k < n; ++k) frames.push_back(side_frame(2 * pi * k / n + pi / n, rin));
  const Mat2 half_turn = rotation(pi);
  for (int s = 0; s < n; ++s) {
    int p = S.domain.side_pairing[s];
    if (s > p) continue;
    int j = static_cast<int>(S.generators.size());
    // carries side s onto side p
    S.generators.push_back((frames[p] * half_turn * frames[s].inverse()).normalized().canonical());
    S.domain.side_letter[p] = j + 1;
    S.domain.side_letter[s] = -(j + 1);
  }
  detail::finalize_polygon_surface(S);
  auto walk = detail::walk_vertex(S, 0);
  if (static_cast<int>(walk.sides.size()) != n)
    throw Error(ErrorKind::RelatorViolation, "polygon has more than one vertex cycle");
  for (int s : walk.sides) S.relator.push_back(S.domain.side_letter[s]);
  S.relators = {S.relator};
  return S;
}

double side_distance(const SurfaceGroup& S, int side, Point z) {
  return signed_distance_framed(S.side_frames_inv[side], z);
}

double max_side_distance(const SurfaceGroup& S, Point z, int* argmax) {
  double best = -1e300;
  for (int s = 0; s < S.sides(); ++s) {
    double d = side_distance(S, s, z);
    if (d > best) {
      best = d;
      if (argmax) *argmax = s;
    }
  }
  return best;
}

bool in_domain(const SurfaceGroup& S, Point z, double tol) { return max_side_distance(S, z) <= tol; }

Reduction reduce_point(const SurfaceGroup& S, Point z) {
  Reduction r{z, Mat2::identity()};
  for (int it = 0; it < 100000; ++it) {
    int s = 0;
    double d = max_side_distance(S, r.point, &s);
    if (d <= 1e-12) return r;
    const Mat2 back = S.side_transforms[s].inverse();
    r.point = back.apply(r.point);
    r.element = back * r.element;
  }
  throw Error(ErrorKind::BudgetExceeded, "point reduction did not terminate");
}

UnitTangent reduce_tangent(const SurfaceGroup& S, const UnitTangent& v) {
  Reduction r = reduce_point(S, v.base());
  return {r.element * v.frame};
}

double surface_distance(const SurfaceGroup& S, Point z, Point w) {
  double best = 1e300;
  for (const Mat2& g : S.local_elements) best = std::min(best, hyp_distance(z, g.apply(w)));
  return best;
}

double relator_defect(const SurfaceGroup& S) {
  double worst = 0;
  for (const Word& r : S.relators)
    worst = std::max(worst, psl_distance(evaluate(S.generators, r), Mat2::identity()));
  return worst;
}

double polygon_area(const SurfaceGroup& S) { return S.area; }

}  // namespace hypgeo
