#include "hypgeo/mat2.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hypgeo/error.hpp"

namespace hypgeo {

std::string_view error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::EllipticOrParabolic: return "EllipticOrParabolic";
    case ErrorKind::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorKind::NotFactorable: return "NotFactorable";
    case ErrorKind::RelatorViolation: return "RelatorViolation";
    case ErrorKind::NotTransitive: return "NotTransitive";
    case ErrorKind::RejectionBudgetExceeded: return "RejectionBudgetExceeded";
    case ErrorKind::NoGeodesicInRange: return "NoGeodesicInRange";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ToleranceCollision: return "ToleranceCollision";
    case ErrorKind::BandExceedsCensus: return "BandExceedsCensus";
    case ErrorKind::BallTooSmall: return "BallTooSmall";
    case ErrorKind::DegenerateCrossing: return "DegenerateCrossing";
    case ErrorKind::NonTransverseInput: return "NonTransverseInput";
    case ErrorKind::ChartRadiusExceeded: return "ChartRadiusExceeded";
    case ErrorKind::PackingFailure: return "PackingFailure";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
  }
  return "Error";
}

Mat2 Mat2::normalized() const {
  double dt = det();
  if (!(dt > 0)) throw Error(ErrorKind::DegenerateConfiguration, "non-positive determinant");
  double s = 1.0 / std::sqrt(dt);
  return {a * s, b * s, c * s, d * s};
}

double Mat2::max_abs() const {
  return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
}

Mat2 Mat2::canonical(double eps) const {
  double thr = eps * max_abs();
  for (double e : {a, b, c, d}) {
    if (std::abs(e) > thr) return e > 0 ? *this : -*this;
  }
  return *this;
}

double psl_distance(const Mat2& x, const Mat2& y) {
  Mat2 p = x.normalized(), q = y.normalized();
  double minus = std::max({std::abs(p.a - q.a), std::abs(p.b - q.b), std::abs(p.c - q.c),
                           std::abs(p.d - q.d)});
  double plus = std::max({std::abs(p.a + q.a), std::abs(p.b + q.b), std::abs(p.c + q.c),
                          std::abs(p.d + q.d)});
  return std::min(minus, plus);
}

bool is_identity_psl(const Mat2& m, double tol) { return psl_distance(m, Mat2::identity()) <= tol; }

BoundaryPoint apply(const Mat2& m, BoundaryPoint p) {
  if (p.infinite) {
    if (m.c == 0) return BoundaryPoint::inf();
    return BoundaryPoint::at(m.a / m.c);
  }
  double den = m.c * p.x + m.d;
  if (den == 0) return BoundaryPoint::inf();
  return BoundaryPoint::at((m.a * p.x + m.b) / den);
}

double boundary_angle(BoundaryPoint p) {
  if (p.infinite) return 0.0;
  Point w = (Point(p.x, 0) - Point(0, 1)) / (Point(p.x, 0) + Point(0, 1));
  return std::arg(w);
}

bool same_boundary_point(BoundaryPoint p, BoundaryPoint q, double tol) {
  double d = std::abs(boundary_angle(p) - boundary_angle(q));
  d = std::min(d, 2 * M_PI - d);
  return d <= tol;
}

GeodesicLine axis(const Mat2& m0, double tol) {
  Mat2 m = m0.normalized();
  if (std::abs(m.trace()) <= 2 + tol)
    throw Error(ErrorKind::EllipticOrParabolic, "axis of non-hyperbolic element");
  const double scale = m.max_abs();
  if (std::abs(m.c) <= 1e-16 * scale) {
    BoundaryPoint fin = BoundaryPoint::at(m.b / (m.d - m.a));
    if (std::abs(m.a) > std::abs(m.d)) return {fin, BoundaryPoint::inf()};
    return {BoundaryPoint::inf(), fin};
  }
  double disc = m.trace() * m.trace() - 4.0;
  double s = std::sqrt(disc);
  double amd = m.a - m.d;
  double q = 0.5 * (amd + (amd >= 0 ? s : -s));
  double x1 = q / m.c;
  double x2 = -m.b / q;
  // attracting fixed point x has |c x + d| > 1
  bool x1_attract = std::abs(m.c * x1 + m.d) > 1.0;
  if (x1_attract) return {BoundaryPoint::at(x2), BoundaryPoint::at(x1)};
  return {BoundaryPoint::at(x1), BoundaryPoint::at(x2)};
}

namespace {

// Sign of (x - y), with pairs involving ∞ cancelled by the caller.
int factor_sign(BoundaryPoint x, BoundaryPoint y) {
  if (x.infinite || y.infinite) return 1;
  return (x.x - y.x) > 0 ? 1 : -1;
}

}  // namespace

bool axes_cross(const GeodesicLine& l1, const GeodesicLine& l2, double tol) {
  BoundaryPoint pts[4] = {l1.repel, l1.attract, l2.repel, l2.attract};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (same_boundary_point(pts[i], pts[j], tol))
        throw Error(ErrorKind::DegenerateConfiguration, "coincident endpoints");
  const BoundaryPoint &p = l1.repel, &q = l1.attract, &r = l2.repel, &s = l2.attract;
  // cross ratio (p - r)(q - s) / ((p - s)(q - r)) is negative iff the pairs separate
  int sign = factor_sign(p, r) * factor_sign(q, s) * factor_sign(p, s) * factor_sign(q, r);
  return sign < 0;
}

Mat2 line_frame(const GeodesicLine& line) {
  const BoundaryPoint &p = line.repel, &q = line.attract;
  if (q.infinite) return {1, p.x, 0, 1};
  if (p.infinite) return {q.x, -1, 1, 0};
  double dt = q.x - p.x;
  Mat2 m = dt > 0 ? Mat2{q.x, p.x, 1, 1} : Mat2{-q.x, p.x, -1, 1};
  double s = 1.0 / std::sqrt(std::abs(dt));
  return {m.a * s, m.b * s, m.c * s, m.d * s};
}

GeodesicLine line_through(Point z, Point w) {
  double x1 = z.real(), x2 = w.real();
  double scale = std::abs(z) + std::abs(w);
  if (std::abs(x1 - x2) <= 1e-13 * scale) {
    double x = 0.5 * (x1 + x2);
    if (w.imag() > z.imag()) return {BoundaryPoint::at(x), BoundaryPoint::inf()};
    return {BoundaryPoint::inf(), BoundaryPoint::at(x)};
  }
  double c = (std::norm(w) - std::norm(z)) / (2 * (x2 - x1));
  double rad = std::abs(z - Point(c, 0));
  if (x2 > x1) return {BoundaryPoint::at(c - rad), BoundaryPoint::at(c + rad)};
  return {BoundaryPoint::at(c + rad), BoundaryPoint::at(c - rad)};
}

double signed_distance_framed(const Mat2& frame_inv, Point z) {
  Point w = frame_inv.apply(z);
  return std::asinh(w.real() / w.imag());
}

double signed_distance(const GeodesicLine& line, Point z) {
  return signed_distance_framed(line_frame(line).inverse(), z);
}

double hyp_distance(Point z, Point w) {
  return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

double cosh_distance(Point z, Point w) {
  return 1.0 + std::norm(z - w) / (2.0 * z.imag() * w.imag());
}

Mat2 rotation(double phi) {
  double c = std::cos(0.5 * phi), s = std::sin(0.5 * phi);
  return {c, s, -s, c};
}

UnitTangent frame_at(Point z, double phi) {
  double sy = std::sqrt(z.imag());
  Mat2 n{sy, z.real() / sy, 0, 1.0 / sy};
  return {n * rotation(phi)};
}

UnitTangent rotate_vector(const UnitTangent& v, double phi) { return {v.frame * rotation(phi)}; }

std::string to_string(const Mat2& m) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "[[%.17g, %.17g], [%.17g, %.17g]]", m.a, m.b, m.c, m.d);
  return buf;
}

}  // namespace hypgeo
