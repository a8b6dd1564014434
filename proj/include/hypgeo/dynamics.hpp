#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "hypgeo/ball.hpp"
#include "hypgeo/census.hpp"
#include "hypgeo/exec.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

struct FlowBox {
  UnitTangent center;  // base point inside the polygon
  double eta1 = 0, eta2 = 0, eta3 = 0;
  const SurfaceGroup* surface = nullptr;

  FlowBox scaled(double f) const { return {center, eta1 * f, eta2 * f, eta3 * f, surface}; }
  FlowBox minus() const { return scaled(1.0 / 3); }
  FlowBox plus() const { return scaled(3); }
  FlowBox plus_plus() const { return scaled(9); }
  // Bound on the distance from the center's base point to any base point of the box.
  double extent() const { return 0.5 * (eta1 + eta2 + eta3); }
  bool chart_contains(const Mat2& frame) const;  // no lift search
};

FlowBox make_box(const SurfaceGroup& S, const UnitTangent& center, double eta1, double eta2,
                 double eta3);
inline FlowBox make_box(const SurfaceGroup& S, const UnitTangent& center, double eta) {
  return make_box(S, center, eta, eta, eta);
}
double chart_radius(const SurfaceGroup& S);

bool box_contains(const FlowBox& B, const UnitTangent& w);
// Like box_contains for a vector already reduced into the polygon.
bool box_contains_reduced(const FlowBox& B, const UnitTangent& w);
bool is_embedded(const FlowBox& B);
FlowBox transverse_box(const FlowBox& B);
// Liouville mass of the box chart, normalized so that T¹X has mass 1.
double box_volume(const FlowBox& B);

// Exact: some tangent vector of the line lies in the box chart (no lift search).
bool line_meets_chart(const FlowBox& B, const GeodesicLine& line);
// Some lift of the closed geodesic passes through the box.
bool geodesic_meets_box(const SurfaceGroup& S, const std::vector<ChordRep>& chords, const FlowBox& B);

UnitTangent liouville_sample(const SurfaceGroup& S, std::mt19937_64& rng);
// Probability that one Liouville draw accepts its candidate point.
double liouville_acceptance(const SurfaceGroup& S);

struct MixingEstimate {
  double t = 0;
  double estimate = 0;
  double stderr_ = 0;
  std::size_t trials = 0;
  std::optional<double> kappa_fit;
};

struct MixingCurve {
  std::vector<MixingEstimate> points;
  double mu1 = 0, mu2 = 0;  // empirical box masses from the same samples
  double stderr1 = 0, stderr2 = 0;
};

MixingCurve mixing_curve(const SurfaceGroup& S, const FlowBox& B1, const FlowBox& B2,
                         const std::vector<double>& t_grid, std::size_t trials, std::uint64_t seed,
                         Exec exec = Exec::parallel);
// Fraction of samples with g_{t_i} v in B_i for every i.
MixingEstimate multi_mixing(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                            const std::vector<double>& times, std::size_t trials, std::uint64_t seed,
                            Exec exec = Exec::parallel);
// Empirical Liouville mass of a union of boxes.
std::pair<double, double> union_mass(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                                     std::size_t trials, std::uint64_t seed, Exec exec = Exec::parallel);

struct ClosingHit {
  double length;
  Word word;
};

// Ball radius that closing_census needs for boxes of this size.
double closing_ball_radius(const SurfaceGroup& S, double L, const FlowBox& B);
// Closed geodesics whose length lies within the box's flow width eta2 of L.
std::vector<ClosingHit> closing_census(const SurfaceGroup& S, const FlowBox& B, double L,
                                       const std::vector<BallElement>& ball, double ball_radius);
// Union over a family of boxes, one entry per class.
std::vector<ClosingHit> closing_census_union(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                                             double L, const std::vector<BallElement>& ball,
                                             double ball_radius, Exec exec = Exec::parallel);
// Boxes centered on a polar grid of spacing `spacing` around the polygon times
// `directions` angles; together they meet every line crossing the polygon.
std::vector<FlowBox> closing_box_cover(const SurfaceGroup& S, double eta_flow, double eta_transverse,
                                       double spacing, int directions);

std::pair<Point, double> embedded_disc_center(const SurfaceGroup& S, double grid_step = 0.1);
double injectivity_radius(const SurfaceGroup& S, Point p, const std::vector<Mat2>& elements);

// Pairs (B, B̂) at points of the polygon, in several directions.
std::vector<std::pair<FlowBox, FlowBox>> transverse_pairs(const SurfaceGroup& S,
                                                          const std::vector<Point>& points,
                                                          int directions, double eta);
bool passes_transverse_filter(const SurfaceGroup& S, const std::vector<ChordRep>& chords,
                              const std::vector<std::pair<FlowBox, FlowBox>>& pairs);

struct DelaunayNet {
  double r = 0;
  std::vector<Point> centers;                  // in the polygon
  std::vector<std::array<int, 3>> triangles;   // center indices
  std::vector<std::array<Point, 3>> triangle_lifts;  // vertices of a lift of each triangle
  struct Edge {
    int a, b;
    Point pa, pb;  // lifted endpoints
    double length;
  };
  std::vector<Edge> edges;
  std::vector<FlowBox> edge_boxes;
  int perturbations = 0;
  int max_degree = 0;
  double degree_bound = 0;
  double edge_constant = 0;  // edges per unit genus
};

struct NetCheck {
  int edge_violations = 0;
  int angle_violations = 0;
  int disjointness_violations = 0;
  int coverage_violations = 0;
  int euler_characteristic = 0;
  double min_edge = 0, max_edge = 0, max_angle_deg = 0;
};

DelaunayNet build_delaunay_net(const SurfaceGroup& S, double r, double box_fraction = 0.1);
NetCheck check_net(const SurfaceGroup& S, const DelaunayNet& net, std::size_t coverage_samples,
                   std::uint64_t seed);
bool passes_net_filter(const SurfaceGroup& S, const std::vector<ChordRep>& chords,
                       const DelaunayNet& net);

// Fraction of census classes of length <= L that miss at least one box.
double box_avoidance_stats(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                           const CensusResult& census, double L, Exec exec = Exec::parallel);

}  // namespace hypgeo
