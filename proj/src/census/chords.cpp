#include <algorithm>
#include <cmath>

#include "hypgeo/census.hpp"
#include "hypgeo/error.hpp"

namespace hypgeo {

namespace {

// Conjugates of one element are equal iff their oriented axes agree. Endpoint angles stay
// well conditioned when the matrix entries have drifted through repeated conjugation.
bool same_lift(const GeodesicLine& x, const GeodesicLine& y) {
  return same_boundary_point(x.repel, y.repel, 1e-6) && same_boundary_point(x.attract, y.attract, 1e-6);
}

}  // namespace

bool axis_meets_domain(const SurfaceGroup& S, const GeodesicLine& line, double tol) {
  const Mat2 finv = line_frame(line).inverse();
  double lo = 1e300, hi = -1e300;
  for (const Point& v : S.domain.vertices) {
    double d = signed_distance_framed(finv, v);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return lo <= tol && hi >= -tol;
}

Mat2 conjugate_into_domain(const SurfaceGroup& S, const Mat2& g) {
  const Mat2 frame = line_frame(axis(g));
  Point w = frame.inverse().apply(S.basepoint);
  Point foot = frame.apply(Point(0, std::abs(w)));
  return reduce_point(S, foot).element;
}

std::vector<ChordRep> chord_representatives(const SurfaceGroup& S, const Mat2& g, double tol,
                                            std::size_t max_reps) {
  if (!S.is_polygon_surface())
    throw Error(ErrorKind::ConfigError, "chords need a polygon surface");
  const int n = S.sides();
  const auto& V = S.domain.vertices;
  if (!axis_meets_domain(S, axis(g), tol))
    throw Error(ErrorKind::DegenerateConfiguration, "axis misses the fundamental polygon");
  std::vector<ChordRep> reps{{g.normalized(), Mat2::identity(), {}}};
  std::vector<GeodesicLine> axes{axis(reps[0].element)};
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const Mat2 finv = line_frame(axes[i]).inverse();
    for (int k = 0; k < n; ++k) dist[k] = signed_distance_framed(finv, V[k]);
    for (int s = 0; s < n; ++s) {
      double a = dist[s], b = dist[(s + 1) % n];
      if (std::min(a, b) > tol || std::max(a, b) < -tol) continue;
      reps[i].sides.push_back(s);
      const Mat2& h = S.side_transforms[s];
      Mat2 nb = h.inverse() * reps[i].element * h;
      GeodesicLine nax = axis(nb);
      bool known = false;
      for (const GeodesicLine& a : axes)
        if (same_lift(a, nax)) { known = true; break; }
      if (known) continue;
      if (reps.size() >= max_reps) throw Error(ErrorKind::BudgetExceeded, "too many chords");
      reps.push_back({nb, reps[i].conjugator * h, {}});
      axes.push_back(nax);
    }
  }
  return reps;
}

}  // namespace hypgeo
