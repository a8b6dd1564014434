#include <algorithm>
#include <cmath>

#include "hypgeo/dynamics.hpp"
#include "hypgeo/error.hpp"

namespace hypgeo {

namespace {

void require_polygon(const SurfaceGroup& S) {
  if (!S.is_polygon_surface())
    throw Error(ErrorKind::ConfigError, "flow boxes need a polygon surface");
}

void check_chart(const FlowBox& B) {
  if (B.surface == nullptr) throw Error(ErrorKind::ConfigError, "flow box without a surface");
  if (B.extent() > chart_radius(*B.surface))
    throw Error(ErrorKind::ChartRadiusExceeded, "flow box wider than the lift search radius");
}

// Box points at fractions of the half-widths, for the sampled injectivity check.
std::vector<Mat2> sample_chart(const FlowBox& B) {
  static const double fr[] = {-0.45, -0.225, 0, 0.225, 0.45};
  std::vector<Mat2> out;
  for (double a : fr)
    for (double b : fr)
      for (double c : fr) out.push_back(flowbox_compose({a * B.eta1, b * B.eta2, c * B.eta3}));
  return out;
}

}  // namespace

double chart_radius(const SurfaceGroup& S) { return 0.5 * S.inradius; }

FlowBox make_box(const SurfaceGroup& S, const UnitTangent& center, double eta1, double eta2,
                 double eta3) {
  require_polygon(S);
  if (!(eta1 > 0 && eta2 > 0 && eta3 > 0))
    throw Error(ErrorKind::ConfigError, "flow box widths must be positive");
  return {reduce_tangent(S, center), eta1, eta2, eta3, &S};
}

bool FlowBox::chart_contains(const Mat2& frame) const {
  const Mat2 rel = center.frame.inverse() * frame;
  Mat2 m = rel.normalized();
  if (m.a < 0) m = -m;
  if (!(m.a > 0)) return false;
  const FlowBoxCoords k = flowbox_factor(m);
  return std::abs(k.r1) < 0.5 * eta1 && std::abs(k.t) < 0.5 * eta2 && std::abs(k.r2) < 0.5 * eta3;
}

bool box_contains_reduced(const FlowBox& B, const UnitTangent& w) {
  const SurfaceGroup& S = *B.surface;
  const Point p = B.center.base();
  const double reach = std::cosh(B.extent()) * (1 + 1e-12);
  if (cosh_distance(p, w.base()) <= reach && B.chart_contains(w.frame)) return true;
  for (const Mat2& h : S.neighbors) {
    if (cosh_distance(p, h.apply(w.base())) > reach) continue;
    if (B.chart_contains(h * w.frame)) return true;
  }
  return false;
}

bool box_contains(const FlowBox& B, const UnitTangent& w) {
  check_chart(B);
  return box_contains_reduced(B, reduce_tangent(*B.surface, w));
}

bool is_embedded(const FlowBox& B) {
  if (B.surface == nullptr) throw Error(ErrorKind::ConfigError, "flow box without a surface");
  const SurfaceGroup& S = *B.surface;
  const Point p = B.center.base();
  const double reach = 2 * B.extent();
  // two box points identified by g force d(p, g p) <= reach
  const bool local = reach + 2 * hyp_distance(S.basepoint, p) <= 2 * S.circumradius + 3;
  std::vector<Mat2> elems;
  if (local) {
    elems = S.local_elements;
  } else {
    for (auto& e : collect_ball(S, reach + 2 * hyp_distance(S.basepoint, p) + 1e-9, Exec::serial))
      elems.push_back(e.element);
  }
  std::vector<Mat2> close;
  for (const Mat2& g : elems) {
    if (is_identity_psl(g, 1e-9)) continue;
    if (hyp_distance(p, g.apply(p)) <= reach + 1e-12) close.push_back(g);
  }
  if (close.empty()) return true;
  const Mat2 c = B.center.frame, ci = c.inverse();
  for (const Mat2& x : sample_chart(B))
    for (const Mat2& g : close)
      if (B.chart_contains(c * (ci * g * c) * x)) return false;
  return true;
}

FlowBox transverse_box(const FlowBox& B) {
  FlowBox out = B;
  out.center = rotate_vector(B.center, M_PI / 2);
  return out;
}

double box_volume(const FlowBox& B) {
  // Haar density in the chart is e^t dr1 dt dr2; T¹X has mass π·area in the same units.
  return B.eta1 * B.eta3 * 2 * std::sinh(0.5 * B.eta2) / (M_PI * B.surface->area);
}

bool line_meets_chart(const FlowBox& B, const GeodesicLine& line) {
  const Mat2 ci = B.center.frame.inverse();
  const BoundaryPoint fwd = apply(ci, line.attract), back = apply(ci, line.repel);
  // frame h^u_{r1} g_t h^s_{r2} sends ∞ to 1/r1 and 0 to s/(r1 s + 1) with s = e^t r2
  double r1;
  if (fwd.infinite) r1 = 0;
  else if (fwd.x == 0) return false;
  else r1 = 1 / fwd.x;
  if (!(std::abs(r1) < 0.5 * B.eta1)) return false;
  double s;
  if (back.infinite) {
    if (r1 == 0) return false;
    s = -1 / r1;
  } else {
    double den = 1 - r1 * back.x;
    if (den == 0) return false;
    s = back.x / den;
  }
  return std::abs(s) < 0.5 * B.eta3 * std::exp(0.5 * B.eta2);
}

bool geodesic_meets_box(const SurfaceGroup& S, const std::vector<ChordRep>& chords, const FlowBox& B) {
  check_chart(B);
  for (const ChordRep& r : chords) {
    const GeodesicLine ax = axis(r.element);
    if (line_meets_chart(B, ax)) return true;
    for (const Mat2& h : S.neighbors) {
      GeodesicLine l{apply(h, ax.repel), apply(h, ax.attract)};
      if (line_meets_chart(B, l)) return true;
    }
  }
  return false;
}

std::vector<std::pair<FlowBox, FlowBox>> transverse_pairs(const SurfaceGroup& S,
                                                          const std::vector<Point>& points,
                                                          int directions, double eta) {
  if (directions < 1) throw Error(ErrorKind::ConfigError, "need at least one direction");
  std::vector<std::pair<FlowBox, FlowBox>> out;
  for (const Point& z : points)
    for (int k = 0; k < directions; ++k) {
      FlowBox b = make_box(S, frame_at(z, 2 * M_PI * k / directions), eta);
      out.emplace_back(b, transverse_box(b));
    }
  return out;
}

bool passes_transverse_filter(const SurfaceGroup& S, const std::vector<ChordRep>& chords,
                              const std::vector<std::pair<FlowBox, FlowBox>>& pairs) {
  for (const auto& [b, bh] : pairs)
    if (geodesic_meets_box(S, chords, b) && geodesic_meets_box(S, chords, bh)) return true;
  return false;
}

double box_avoidance_stats(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                           const CensusResult& census, double L, Exec exec) {
  if (L > census.L_max + 1e-12)
    throw Error(ErrorKind::BandExceedsCensus, "avoidance length past the census length");
  std::vector<const ClosedGeodesic*> sel;
  for (const auto& c : census.classes)
    if (c.length <= L) sel.push_back(&c);
  if (sel.empty() || boxes.empty()) return 0;
  for (const FlowBox& b : boxes) check_chart(b);
  std::vector<char> avoid(sel.size(), 0);
  const long n = static_cast<long>(sel.size());
  ErrorSlot err;
#pragma omp parallel for schedule(dynamic, 8) if (exec == Exec::parallel)
  for (long i = 0; i < n; ++i) {
    err.guard([&] {
      const auto chords = chord_representatives(S, sel[i]->matrix);
      for (const FlowBox& b : boxes)
        if (!geodesic_meets_box(S, chords, b)) {
          avoid[i] = 1;
          break;
        }
    });
  }
  err.rethrow();
  std::size_t k = std::count(avoid.begin(), avoid.end(), 1);
  return static_cast<double>(k) / sel.size();
}

}  // namespace hypgeo
