#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "hypgeo/dynamics.hpp"
#include "hypgeo/error.hpp"
#include "hypgeo/topology.hpp"
#include "oracles/word_enum.hpp"

using namespace hypgeo;

namespace {

const SurfaceGroup& genus2() {
  static const SurfaceGroup S = build_regular_surface(2);
  return S;
}

const double kSystole = 2 * std::acosh(1 + std::sqrt(2.0));

const CensusResult& census() {
  static const CensusResult C = enumerate_closed_geodesics(genus2(), 10.2);
  return C;
}

// Position and direction angle of the tangent vector of a frame.
void xyphi(const Mat2& m, double& x, double& y, double& phi) {
  Point z = m.apply(Point(0, 1));
  Point den = m.c * Point(0, 1) + m.d;
  x = z.real();
  y = z.imag();
  phi = std::arg(Point(0, 1) / (den * den));
}

// Liouville mass dx dy dphi / y^2 of the chart image, by midpoint quadrature with
// central-difference Jacobians, normalized by the mass 2π·area of T¹X.
double integrated_volume(const FlowBox& B, int n) {
  const double h = 1e-6;
  const double w[3] = {B.eta1, B.eta2, B.eta3};
  double total = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double q[3] = {(-0.5 + (i + 0.5) / n) * w[0], (-0.5 + (j + 0.5) / n) * w[1], (-0.5 + (k + 0.5) / n) * w[2]};
        double J[3][3];
        double x0, y0, p0;
        xyphi(B.center.frame * flowbox_compose({q[0], q[1], q[2]}), x0, y0, p0);
        for (int a = 0; a < 3; ++a) {
          double qp[3] = {q[0], q[1], q[2]}, qm[3] = {q[0], q[1], q[2]};
          qp[a] += h;
          qm[a] -= h;
          double xp, yp, pp, xm, ym, pm;
          xyphi(B.center.frame * flowbox_compose({qp[0], qp[1], qp[2]}), xp, yp, pp);
          xyphi(B.center.frame * flowbox_compose({qm[0], qm[1], qm[2]}), xm, ym, pm);
          double dphi = std::remainder(pp - pm, 2 * M_PI);
          J[0][a] = (xp - xm) / (2 * h);
          J[1][a] = (yp - ym) / (2 * h);
          J[2][a] = dphi / (2 * h);
        }
        double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) - J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                     J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        total += std::abs(det) / (y0 * y0);
      }
  return total * (w[0] * w[1] * w[2]) / (n * n * n) / (2 * M_PI * genus2().area);
}

Point from_disk(Point w) { return Point(0, 1) * (1.0 + w) / (1.0 - w); }

UnitTangent in_box(const FlowBox& B, double f1, double f2, double f3) {
  return {B.center.frame * flowbox_compose({f1 * B.eta1 / 2, f2 * B.eta2 / 2, f3 * B.eta3 / 2})};
}

UnitTangent systole_frame() {
  for (const auto& c : census().classes)
    if (c.length < 3.1) return {line_frame(axis(c.matrix))};
  return {};
}

}  // namespace

TEST_CASE("box membership") {
  const SurfaceGroup& S = genus2();
  FlowBox B = make_box(S, frame_at(Point(0.1, 1.2), 0.3), 0.2);
  CHECK(box_contains(B, B.center));
  CHECK(!box_contains(B, apply_flow(B.center, FlowKind::geodesic, B.eta2)));
  CHECK(box_contains(B, apply_flow(B.center, FlowKind::unstable, B.eta1 / 4)));
  CHECK(box_contains(B, apply_flow(B.center, FlowKind::stable, B.eta3 / 4)));
  CHECK(!box_contains(B, apply_flow(B.center, FlowKind::stable, B.eta3)));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int i = 0; i < 200; ++i) {
    UnitTangent w = in_box(B, u(rng), u(rng), u(rng));
    CHECK(box_contains(B, w));
    for (const Mat2& g : S.neighbors) CHECK(box_contains(B, {g * w.frame}));
    UnitTangent out = in_box(B, u(rng), 1.05 + 0.5 * (u(rng) + 1), u(rng));
    CHECK(!box_contains(B, out));
  }
  CHECK(B.minus().eta1 == doctest::Approx(B.eta1 / 3));
  CHECK(B.plus().eta2 == doctest::Approx(3 * B.eta2));
  CHECK(B.plus_plus().eta3 == doctest::Approx(9 * B.eta3));
  FlowBox wide = make_box(S, B.center, 1.0);
  CHECK_THROWS_AS(box_contains(wide, B.center), Error);
  CHECK_THROWS_AS(make_box(S, B.center, 0.0), Error);
}

TEST_CASE("embedding") {
  const SurfaceGroup& S = genus2();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.6, 0.6), a(0, 2 * M_PI);
  for (int i = 0; i < 20; ++i) {
    FlowBox B = make_box(S, frame_at(from_disk(Point(u(rng), u(rng))), a(rng)), kSystole / 20);
    CHECK(is_embedded(B));
    CHECK(is_embedded(B.minus()));
  }
  // a box longer than the systole along a systole axis wraps onto itself
  FlowBox W = make_box(S, systole_frame(), 0.01, 1.5 * kSystole, 0.01);
  CHECK(!is_embedded(W));
  CHECK(is_embedded(make_box(S, systole_frame(), 0.01, 0.9 * kSystole, 0.01)));
}

TEST_CASE("transverse boxes") {
  const SurfaceGroup& S = genus2();
  FlowBox B = make_box(S, frame_at(Point(-0.2, 0.9), 1.1), kSystole / 100);
  FlowBox T = transverse_box(B);
  FlowBox TT = transverse_box(T);
  CHECK(psl_distance(TT.center.frame.canonical(), rotate_vector(B.center, M_PI).frame.canonical()) <= 1e-12);
  CHECK(std::abs(TT.center.base() - B.center.base()) <= 1e-12);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 2000; ++i) {
    CHECK(!box_contains(T, in_box(B, u(rng), u(rng), u(rng))));
    CHECK(!box_contains(B, in_box(T, u(rng), u(rng), u(rng))));
  }
}

TEST_CASE("box volume") {
  const SurfaceGroup& S = genus2();
  for (auto [e1, e2, e3] : {std::tuple{0.2, 0.2, 0.2}, std::tuple{0.1, 0.6, 0.3}, std::tuple{0.5, 0.5, 0.5}}) {
    FlowBox B = make_box(S, frame_at(Point(0.1, 1.2), 0.3), e1, e2, e3);
    CHECK(box_volume(B) == doctest::Approx(integrated_volume(B, 16)).epsilon(1e-4));
  }
  FlowBox B = make_box(S, frame_at(Point(0.1, 1.2), 0.3), 0.2);
  MixingCurve m = mixing_curve(S, B, B, {0.0}, 1000000, 7);
  CHECK(std::abs(m.mu1 - box_volume(B)) <= 3 * m.stderr1);
  CHECK(m.stderr1 == doctest::Approx(std::sqrt(m.mu1 * (1 - m.mu1) / 1e6)));
}

TEST_CASE("Liouville sampling") {
  const SurfaceGroup& S = genus2();
  // independent sampler: area-uniform points of the circumscribed disc
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  const int n = 200000;
  int inside = 0;
  for (int i = 0; i < n; ++i) {
    double rho = std::acosh(1 + u(rng) * (std::cosh(S.circumradius) - 1));
    double th = 2 * M_PI * u(rng);
    inside += in_domain(S, rotation(th).apply(Point(0, std::exp(rho))), 0);
  }
  double p = liouville_acceptance(S);
  CHECK(p == doctest::Approx(S.area / (2 * M_PI * (std::cosh(S.circumradius) - 1))).epsilon(1e-9));
  CHECK(p == doctest::Approx(0.4142).epsilon(1e-3));
  CHECK(std::abs(static_cast<double>(inside) / n - p) <= 3 * std::sqrt(p * (1 - p) / n));

  std::mt19937_64 a(11), b(11), c(12);
  double right = 0, cos_sum = 0;
  bool differs = false;
  const int m = 100000;
  for (int i = 0; i < m; ++i) {
    UnitTangent va = liouville_sample(S, a), vb = liouville_sample(S, b), vc = liouville_sample(S, c);
    CHECK(va.frame.a == vb.frame.a);
    differs |= va.frame.a != vc.frame.a;
    CHECK(in_domain(S, va.base(), 1e-12));
    right += va.base().real() > 0;
    double x, y, phi;
    xyphi(va.frame, x, y, phi);
    cos_sum += std::cos(phi);
  }
  CHECK(differs);
  // the polygon is symmetric under x -> -x; directions are uniform
  CHECK(std::abs(right / m - 0.5) <= 3 * 0.5 / std::sqrt(m));
  CHECK(std::abs(cos_sum / m) <= 3 * std::sqrt(0.5 / m));
}

TEST_CASE("mixing estimates") {
  const SurfaceGroup& S = genus2();
  FlowBox B = make_box(S, frame_at(Point(0, 1), 0), 0.5);
  FlowBox near = make_box(S, frame_at(Point(0, 1), 0), 0.2);
  FlowBox far = make_box(S, frame_at(Point(0.8, 1.6), 2.0), 0.2);
  REQUIRE(surface_distance(S, near.center.base(), far.center.base()) > near.extent() + far.extent());
  MixingCurve same = mixing_curve(S, B, B, {0.0, 1.0, 4.0}, 200000, 3, Exec::serial);
  CHECK(same.points[0].estimate == same.mu1);
  CHECK(std::abs(same.points[0].estimate - box_volume(B)) <= 3 * same.points[0].stderr_);
  for (const auto& pt : same.points) {
    CHECK(pt.estimate >= 0);
    CHECK(pt.estimate <= 1);
    CHECK(pt.trials == 200000);
    CHECK(pt.stderr_ == doctest::Approx(std::sqrt(pt.estimate * (1 - pt.estimate) / pt.trials)));
  }
  MixingCurve disjoint = mixing_curve(S, near, far, {0.0}, 200000, 3);
  CHECK(disjoint.points[0].estimate == 0);

  MixingCurve par = mixing_curve(S, B, B, {0.0, 1.0, 4.0}, 200000, 3, Exec::parallel);
  for (std::size_t i = 0; i < par.points.size(); ++i) CHECK(par.points[i].estimate == same.points[i].estimate);
  CHECK(par.mu1 == same.mu1);

  MixingEstimate one = multi_mixing(S, {B}, {0.0}, 200000, 3);
  CHECK(one.estimate == same.mu1);
  MixingEstimate two = multi_mixing(S, {B, B}, {0.0, 1.0}, 200000, 3);
  CHECK(two.estimate == same.points[1].estimate);
  auto [mass, err] = union_mass(S, {near, far}, 200000, 3);
  CHECK(std::abs(mass - box_volume(near) - box_volume(far)) <= 3 * err + 1e-12);
  CHECK_THROWS_AS(multi_mixing(S, {B, B}, {0.0}, 10, 1), Error);
}

TEST_CASE("closing census against the word census") {
  const SurfaceGroup& S = genus2();
  std::vector<FlowBox> cover = closing_box_cover(S, 0.05, 0.4, 0.12, 32);
  for (double L : {2.9, 3.05, 6.1}) {
    CAPTURE(L);
    double br = closing_ball_radius(S, L, cover.front());
    std::vector<BallElement> ball = collect_ball(S, br);
    std::vector<ClosingHit> hits = closing_census_union(S, cover, L, ball, br);
    std::map<long, int> a, b;
    for (const auto& c : census().classes)
      if (c.length >= L - 0.05 && c.length <= L + 0.05) a[std::lround(c.length * 1e6)]++;
    for (const auto& h : hits) b[std::lround(h.length * 1e6)]++;
    CHECK(a == b);
    if (L < kSystole - 0.05) CHECK(hits.empty());
    std::vector<ClosingHit> serial = closing_census_union(S, cover, L, ball, br, Exec::serial);
    REQUIRE(serial.size() == hits.size());
    for (std::size_t i = 0; i < hits.size(); ++i) CHECK(serial[i].word == hits[i].word);
  }
  // a single box on a systole axis closes up on that class only
  FlowBox B = make_box(S, systole_frame(), 0.05);
  double br = closing_ball_radius(S, kSystole, B);
  std::vector<ClosingHit> hits = closing_census(S, B, kSystole, collect_ball(S, br), br);
  REQUIRE(hits.size() >= 1);
  for (const auto& h : hits) CHECK(h.length == doctest::Approx(kSystole).epsilon(1e-9));
}

TEST_CASE("embedded disc") {
  const SurfaceGroup& S = genus2();
  auto [p, radius] = embedded_disc_center(S);
  CHECK(in_domain(S, p, 1e-9));
  CHECK(radius >= 0.3);
  // the injectivity radius is at least half the systole everywhere
  CHECK(radius >= kSystole / 2 - 1e-9);
  // independent displacement minimization over all words of length <= 6
  double min_disp = 1e300;
  oracle::for_each_word(S, 6, [&](const Mat2& g, const Word&) {
    if (psl_distance(g.canonical(), Mat2::identity()) > 1e-9) min_disp = std::min(min_disp, hyp_distance(p, g.apply(p)));
  });
  CHECK(min_disp / 2 >= radius - 1e-9);
  double at_center = 1e300;
  oracle::for_each_word(S, 6, [&](const Mat2& g, const Word&) {
    if (psl_distance(g.canonical(), Mat2::identity()) > 1e-9)
      at_center = std::min(at_center, hyp_distance(S.basepoint, g.apply(S.basepoint)));
  });
  CHECK(at_center / 2 >= 0.3);
  std::vector<Mat2> elems;
  for (const auto& e : collect_ball(S, 4)) elems.push_back(e.element);
  CHECK(injectivity_radius(S, S.basepoint, elems) == doctest::Approx(at_center / 2).epsilon(1e-9));
}

TEST_CASE("transverse pair filter is sound") {
  const SurfaceGroup& S = genus2();
  std::vector<Point> grid;
  for (double x = -0.8; x <= 0.8; x += 0.1)
    for (double y = -0.8; y <= 0.8; y += 0.1)
      if (in_domain(S, from_disk(Point(x, y)), 0)) grid.push_back(from_disk(Point(x, y)));
  auto pairs = transverse_pairs(S, grid, 12, 0.3);
  int passed = 0;
  for (const auto& c : census().classes) {
    if (c.length > 8.5 || !c.primitive) continue;
    auto chords = chord_representatives(S, c.matrix);
    if (passes_transverse_filter(S, chords, pairs)) {
      ++passed;
      CHECK(self_intersections(S, c).count >= 1);
    }
  }
  CHECK(passed > 0);
}

TEST_CASE("Delaunay net") {
  const SurfaceGroup& S = genus2();
  const double r = 0.5;
  DelaunayNet net = build_delaunay_net(S, r);
  NetCheck chk = check_net(S, net, 10000, 9);
  CHECK(chk.edge_violations == 0);
  CHECK(chk.angle_violations == 0);
  CHECK(chk.disjointness_violations == 0);
  CHECK(chk.coverage_violations == 0);
  CHECK(chk.euler_characteristic == 2 - 2 * S.genus);
  CHECK(chk.min_edge >= 2 * r);
  CHECK(chk.max_edge <= 6 * r);
  CHECK(chk.max_angle_deg <= 150);
  CHECK(static_cast<int>(net.centers.size()) - static_cast<int>(net.edges.size()) +
            static_cast<int>(net.triangles.size()) ==
        2 - 2 * S.genus);
  CHECK(2 * net.edges.size() == 3 * net.triangles.size());
  CHECK(net.edge_boxes.size() == net.edges.size());
  CHECK(net.max_degree <= net.degree_bound);
  CHECK(net.degree_bound == doctest::Approx((std::cosh(7 * r) - 1) / (std::cosh(r) - 1)));
  // stored data re-checked directly: edge lengths and disc disjointness
  for (const auto& e : net.edges) {
    CHECK(e.length == doctest::Approx(hyp_distance(e.pa, e.pb)));
    CHECK(e.length >= 2 * r);
    CHECK(e.length <= 6 * r);
  }
  for (std::size_t i = 0; i < net.centers.size(); ++i)
    for (std::size_t j = i + 1; j < net.centers.size(); ++j)
      CHECK(surface_distance(S, net.centers[i], net.centers[j]) >= 2 * r - 1e-9);
  for (const auto& b : net.edge_boxes) CHECK(b.eta1 == doctest::Approx(0.1 * r));

  SUBCASE("net filter implies filling") {
    for (const auto& c : census().classes) {
      if (!c.primitive) continue;
      auto chords = chord_representatives(S, c.matrix);
      if (passes_net_filter(S, chords, net)) CHECK(is_filling(S, self_intersections(S, c)).filling);
    }
  }
  SUBCASE("avoidance") {
    CHECK(box_avoidance_stats(S, {}, census(), 8) == 0);
    double prev = 2;
    for (double L : {6.0, 8.0, 10.0}) {
      double f = box_avoidance_stats(S, net.edge_boxes, census(), L);
      CHECK(f >= 0);
      CHECK(f <= 1);
      CHECK(f <= prev);
      prev = f;
      CHECK(box_avoidance_stats(S, net.edge_boxes, census(), L, Exec::serial) == f);
    }
    CHECK_THROWS_AS(box_avoidance_stats(S, net.edge_boxes, census(), 11), Error);
  }
}

TEST_CASE("a systole geodesic meets a box on its own axis") {
  const SurfaceGroup& S = genus2();
  for (const auto& c : census().classes) {
    if (c.length > 3.1) break;
    FlowBox B = make_box(S, {line_frame(axis(c.matrix))}, 0.02);
    CHECK(geodesic_meets_box(S, chord_representatives(S, c.matrix), B));
    CHECK(box_avoidance_stats(S, {B}, census(), 3.1) < 1);
  }
}
