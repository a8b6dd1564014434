#pragma once

#include <complex>
#include <string>

namespace hypgeo {

using Point = std::complex<double>;  // upper half-plane

inline constexpr double kDefaultTol = 1e-9;

struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  static Mat2 identity() { return {}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  // Adjugate; equals the inverse for unit determinant.
  Mat2 inverse() const { return {d, -b, -c, a}; }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  Mat2 normalized() const;
  // Sign representative of the PSL2 class: first entry above `eps` in magnitude is positive.
  Mat2 canonical(double eps = 1e-14) const;
  double max_abs() const;

  Point apply(Point z) const { return (a * z + b) / (c * z + d); }
};

inline Mat2 operator*(const Mat2& x, const Mat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
          x.c * y.b + x.d * y.d};
}

// Sup-norm distance between the PSL2 classes of two matrices.
double psl_distance(const Mat2& x, const Mat2& y);
bool is_identity_psl(const Mat2& m, double tol);

struct UnitTangent {
  Mat2 frame;
  Point base() const { return frame.apply(Point(0, 1)); }
};

// Point of ℝ ∪ {∞}.
struct BoundaryPoint {
  double x = 0;
  bool infinite = false;
  static BoundaryPoint at(double v) { return {v, false}; }
  static BoundaryPoint inf() { return {0, true}; }
};

BoundaryPoint apply(const Mat2& m, BoundaryPoint p);
bool same_boundary_point(BoundaryPoint p, BoundaryPoint q, double tol);
// Angle on the unit circle after the Cayley map to the disk (∞ ↦ 0).
double boundary_angle(BoundaryPoint p);

struct GeodesicLine {
  BoundaryPoint repel, attract;
};

struct FlowBoxCoords {
  double r1 = 0, t = 0, r2 = 0;
};

enum class FlowKind { geodesic, stable, unstable };

Mat2 flow_matrix(FlowKind kind, double s);
UnitTangent apply_flow(const UnitTangent& v, FlowKind kind, double s);

double trace_to_length(double tr, double tol = kDefaultTol);
GeodesicLine axis(const Mat2& m, double tol = kDefaultTol);
bool axes_cross(const GeodesicLine& l1, const GeodesicLine& l2, double tol = kDefaultTol);

FlowBoxCoords flowbox_factor(const Mat2& m);
Mat2 flowbox_compose(const FlowBoxCoords& c);

// Unit-determinant matrix sending 0 to line.repel and ∞ to line.attract.
Mat2 line_frame(const GeodesicLine& line);
// Oriented geodesic through z then w.
GeodesicLine line_through(Point z, Point w);
// Signed distance from z to the line; positive on the right of the direction of travel.
double signed_distance(const GeodesicLine& line, Point z);
double signed_distance_framed(const Mat2& frame_inv, Point z);

double hyp_distance(Point z, Point w);
double cosh_distance(Point z, Point w);

// Rotation about i taking the upward vector to angle `phi` (counterclockwise).
Mat2 rotation(double phi);
// Frame at z whose vector points at angle `phi` counterclockwise from vertical.
UnitTangent frame_at(Point z, double phi);
// The same base point with the vector turned by `phi`.
UnitTangent rotate_vector(const UnitTangent& v, double phi);

std::string to_string(const Mat2& m);

}  // namespace hypgeo
