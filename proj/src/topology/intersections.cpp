#include <algorithm>
#include <cmath>

#include "hypgeo/error.hpp"
#include "hypgeo/topology.hpp"

namespace hypgeo {

namespace {

// Half-open polygon: interior, sides s < partner(s), one vertex per vertex cycle.
bool owned(const SurfaceGroup& S, Point p, double tol) {
  const int n = S.sides();
  int on[2], k = 0;
  for (int s = 0; s < n; ++s) {
    double d = side_distance(S, s, p);
    if (d > tol) return false;
    if (d >= -tol) {
      if (k == 2) throw Error(ErrorKind::DegenerateCrossing, "point on three sides");
      on[k++] = s;
    }
  }
  if (k == 0) return true;
  if (k == 1) return on[0] < S.domain.side_pairing[on[0]];
  int v;
  if ((on[0] + 1) % n == on[1]) v = on[1];
  else if ((on[1] + 1) % n == on[0]) v = on[0];
  else throw Error(ErrorKind::DegenerateCrossing, "point on two non-adjacent sides");
  return S.vertex_cycle_rep[v] == v;
}

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

// Angle of the upward direction along the framed line, transported to p.
double direction(const Mat2& f, Point p) {
  Point z = f.inverse().apply(p);
  Point den = f.c * z + f.d;
  return std::arg(Point(0, 1) / (den * den));
}

}  // namespace

Mat2 primitive_root(const ClosedGeodesic& geo) {
  if (geo.power == 1) return geo.matrix;
  const Mat2 f = line_frame(axis(geo.matrix));
  const Mat2 d = flow_matrix(FlowKind::geodesic, geo.length / geo.power);
  return (f * d * f.inverse()).normalized().canonical();
}

IntersectionData self_intersections(const SurfaceGroup& S, const ClosedGeodesic& geo, double tol) {
  if (!S.is_polygon_surface())
    throw Error(ErrorKind::ConfigError, "self-intersections need a polygon surface");
  IntersectionData out;
  out.power = geo.power;
  Mat2 g = primitive_root(geo);
  const double ell = trace_to_length(g.trace());
  out.length = ell;
  if (!axis_meets_domain(S, axis(g), 1e-7)) {
    Mat2 c = conjugate_into_domain(S, g);
    g = c * g * c.inverse();
  }
  const auto reps = chord_representatives(S, g, 1e-7);
  const Mat2 f0 = line_frame(axis(g));
  std::vector<Mat2> frames, frames_inv;
  std::vector<GeodesicLine> axes;
  for (const ChordRep& r : reps) {
    frames.push_back(r.conjugator.inverse() * f0);
    frames_inv.push_back(frames.back().inverse());
    axes.push_back(axis(r.element));
  }
  const double own_tol = 1e-9;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      BoundaryPoint u = apply(frames_inv[i], axes[j].repel);
      BoundaryPoint w = apply(frames_inv[i], axes[j].attract);
      if (u.infinite || w.infinite)
        throw Error(ErrorKind::DegenerateCrossing, "lifts share an endpoint");
      if (!(u.x * w.x < 0)) continue;
      // angle between the lines: sin = 2 sqrt(-uw) / |w - u|
      double sine = 2 * std::sqrt(-u.x * w.x) / std::abs(w.x - u.x);
      if (sine < tol) throw Error(ErrorKind::DegenerateCrossing, "tangential crossing");
      double h = std::sqrt(-u.x * w.x);
      Point p = frames[i].apply(Point(0, h));
      if (!owned(S, p, own_tol)) continue;
      double ti = wrap(std::log(h), ell);
      double tj = wrap(std::log(frames_inv[j].apply(p).imag()), ell);
      double gap = std::abs(ti - tj);
      if (std::min(gap, ell - gap) < tol)
        throw Error(ErrorKind::DegenerateCrossing, "strands meet at one parameter");
      int sign = u.x > 0 ? 1 : -1;
      double di = direction(frames[i], p), dj = direction(frames[j], p);
      if (ti < tj) out.double_points.push_back({ti, tj, p, sign, di, dj});
      else out.double_points.push_back({tj, ti, p, -sign, dj, di});
    }
  }
  std::sort(out.double_points.begin(), out.double_points.end(), [](const DoublePoint& a, const DoublePoint& b) {
    return a.s1 != b.s1 ? a.s1 < b.s1 : a.s2 < b.s2;
  });
  for (std::size_t k = 1; k < out.double_points.size(); ++k) {
    const auto &a = out.double_points[k - 1], &b = out.double_points[k];
    if (std::abs(a.s1 - b.s1) < tol && std::abs(a.s2 - b.s2) < tol)
      throw Error(ErrorKind::DegenerateCrossing, "double point found twice");
  }
  out.count = static_cast<int>(out.double_points.size());
  return out;
}

bool is_simple(const SurfaceGroup& S, const ClosedGeodesic& geo, PowerConvention conv) {
  if (conv == PowerConvention::strict && geo.power > 1) return false;
  return self_intersections(S, geo).count == 0;
}

}  // namespace hypgeo
