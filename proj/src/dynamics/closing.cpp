#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "hypgeo/dynamics.hpp"
#include "hypgeo/error.hpp"

namespace hypgeo {

namespace {

// Is there X in the chart with K·X·g_L in the chart? Writing X = h^u_{r1} g_t h^s_{r2},
// K·h^u_{r1} = h^u_{a} g_{b} h^s_{c} with a = A/D, b = 2 log|D|, c = k12/D, where
// D = k11 + k12 r1 and A = k21 + k22 r1. The t and r2 constraints then reduce to
// |b + L| < η2 and |c| e^{-t_max} < (η3/2)(e^L + 1), so only r1 is searched: both
// conditions are monotone between the breakpoints collected below.
bool closing_feasible(const Mat2& K, double L, double e1, double e2, double e3) {
  const double lo = -0.5 * e1, hi = 0.5 * e1;
  std::vector<double> xs{lo, hi};
  auto root = [&](double alpha, double beta) {
    if (beta != 0) {
      double r = -alpha / beta;
      if (r > lo && r < hi) xs.push_back(r);
    }
  };
  root(K.a, K.b);
  root(K.c - 0.5 * e1 * K.a, K.d - 0.5 * e1 * K.b);
  root(K.c + 0.5 * e1 * K.a, K.d + 0.5 * e1 * K.b);
  for (double lvl : {std::exp(0.5 * (-L - e2)), std::exp(0.5 * (-L + e2)), std::exp(-0.5 * L)})
    for (double sg : {1.0, -1.0}) root(K.a - sg * lvl, K.b);
  std::sort(xs.begin(), xs.end());

  const double rhs = 0.5 * e3 * (std::exp(L) + 1);
  auto c_ok = [&](double r) {
    double D = std::abs(K.a + K.b * r);
    if (!(D > 0)) return false;
    double tmax = std::min(0.5 * e2, 0.5 * e2 - 2 * std::log(D) - L);
    return std::abs(K.b) / D * std::exp(-tmax) < rhs;
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    double x0 = xs[i], x1 = xs[i + 1];
    if (!(x1 > x0)) continue;
    double m = 0.5 * (x0 + x1);
    double D = K.a + K.b * m;
    if (D == 0) continue;
    double A = K.c + K.d * m;
    if (!(std::abs(A / D) < 0.5 * e1)) continue;
    if (!(std::abs(2 * std::log(std::abs(D)) + L) < e2)) continue;
    if (c_ok(m) || c_ok(x0) || c_ok(x1)) return true;
  }
  return false;
}

struct BandElement {
  std::size_t index;  // into the ball
  double length;
};

std::vector<BandElement> band_elements(const std::vector<BallElement>& ball, double L, double eta) {
  std::vector<BandElement> out;
  const double tlo = L - eta > 0 ? 2 * std::cosh(0.5 * (L - eta)) : 2;
  const double thi = 2 * std::cosh(0.5 * (L + eta));
  for (std::size_t i = 0; i < ball.size(); ++i) {
    double tr = std::abs(ball[i].element.trace());
    if (tr <= 2 + 1e-9 || tr < tlo * (1 - 1e-12) || tr > thi * (1 + 1e-12)) continue;
    double ell = trace_to_length(tr);
    if (ell >= L - eta && ell <= L + eta) out.push_back({i, ell});
  }
  return out;
}

std::vector<std::size_t> feasible_in_box(const FlowBox& B, double L, const std::vector<BallElement>& ball,
                                         const std::vector<BandElement>& band) {
  std::vector<std::size_t> hits;
  const Point p = B.center.base();
  const double reach = std::cosh(L + 2 * B.extent()) * (1 + 1e-12);
  const Mat2 c = B.center.frame, ci = c.inverse();
  for (std::size_t j = 0; j < band.size(); ++j) {
    const Mat2& g = ball[band[j].index].element;
    if (cosh_distance(p, g.apply(p)) > reach) continue;
    const Mat2 K = (ci * g.inverse() * c).normalized();
    if (closing_feasible(K, L, B.eta1, B.eta2, B.eta3)) hits.push_back(j);
  }
  return hits;
}

// One entry per conjugacy class; classes are told apart by their chord sets.
class ClassRegistry {
 public:
  explicit ClassRegistry(const SurfaceGroup& S) : S_(S), keyer_(S.basepoint) {}

  // Returns true when g opens a new class.
  bool add(const Mat2& g) {
    Mat2 h = g.normalized();
    if (!axis_meets_domain(S_, axis(h), 1e-7)) {
      Mat2 c = conjugate_into_domain(S_, h);
      h = (c * h * c.inverse()).normalized();
    }
    if (find(h)) return false;
    for (const ChordRep& r : chord_representatives(S_, h, 1e-7)) {
      reps_.push_back(r.element);
      index_[keyer_.key(r.element.apply(S_.basepoint))].push_back(reps_.size() - 1);
    }
    return true;
  }

 private:
  bool find(const Mat2& h) const {
    std::uint64_t keys[9];
    keyer_.probe_keys(h.apply(S_.basepoint), keys);
    for (auto k : keys) {
      auto it = index_.find(k);
      if (it == index_.end()) continue;
      for (std::size_t i : it->second)
        if (psl_distance(reps_[i], h) <= 1e-7 * std::max(1.0, h.max_abs())) return true;
    }
    return false;
  }
  const SurfaceGroup& S_;
  OrbitKeyer keyer_;
  std::vector<Mat2> reps_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
};

}  // namespace

double closing_ball_radius(const SurfaceGroup& S, double L, const FlowBox& B) {
  // d(p, g p) <= L + 2·extent for a closing element, and p sits in the polygon
  return L + 2 * B.extent() + 2 * S.circumradius + 1e-6;
}

std::vector<ClosingHit> closing_census_union(const SurfaceGroup& S, const std::vector<FlowBox>& boxes,
                                             double L, const std::vector<BallElement>& ball,
                                             double ball_radius, Exec exec) {
  if (!S.is_polygon_surface()) throw Error(ErrorKind::ConfigError, "closing needs a polygon surface");
  std::vector<ClosingHit> out;
  if (boxes.empty()) return out;
  double eta = 0;
  for (const FlowBox& b : boxes) {
    if (closing_ball_radius(S, L, b) > ball_radius + 1e-9)
      throw Error(ErrorKind::BallTooSmall, "ball radius below what the box needs");
    if (b.eta2 != boxes.front().eta2)
      throw Error(ErrorKind::ConfigError, "boxes in one closing census share the flow width");
    eta = b.eta2;
  }
  const auto band = band_elements(ball, L, eta);
  std::vector<std::vector<std::size_t>> per_box(boxes.size());
  const long nb = static_cast<long>(boxes.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::parallel)
  for (long i = 0; i < nb; ++i) per_box[i] = feasible_in_box(boxes[i], L, ball, band);

  ClassRegistry reg(S);
  std::vector<char> seen(band.size(), 0);
  for (const auto& hits : per_box)
    for (std::size_t j : hits) {
      if (seen[j]) continue;
      seen[j] = 1;
      const BallElement& e = ball[band[j].index];
      if (reg.add(e.element)) out.push_back({band[j].length, e.word});
    }
  std::stable_sort(out.begin(), out.end(),
                   [](const ClosingHit& x, const ClosingHit& y) { return x.length < y.length; });
  return out;
}

std::vector<ClosingHit> closing_census(const SurfaceGroup& S, const FlowBox& B, double L,
                                       const std::vector<BallElement>& ball, double ball_radius) {
  return closing_census_union(S, {B}, L, ball, ball_radius, Exec::serial);
}

std::vector<FlowBox> closing_box_cover(const SurfaceGroup& S, double eta_flow, double eta_transverse,
                                       double spacing, int directions) {
  if (!(spacing > 0) || directions < 1)
    throw Error(ErrorKind::ConfigError, "box cover needs positive spacing and directions");
  std::vector<FlowBox> out;
  const UnitTangent o = frame_at(S.basepoint, 0);
  const double rmax = S.circumradius + spacing;
  for (int k = 0; k * spacing <= rmax; ++k) {
    double rho = k * spacing;
    int m = k == 0 ? 1 : static_cast<int>(std::ceil(2 * M_PI * std::sinh(rho) / spacing));
    for (int j = 0; j < m; ++j) {
      Point z = o.frame.apply(rotation(2 * M_PI * j / m).apply(Point(0, std::exp(rho))));
      if (max_side_distance(S, z) > spacing) continue;
      for (int d = 0; d < directions; ++d)
        out.push_back(make_box(S, frame_at(z, 2 * M_PI * d / directions), eta_transverse, eta_flow,
                               eta_transverse));
    }
  }
  return out;
}

}  // namespace hypgeo
