#pragma once

#include <vector>

#include "hypgeo/census.hpp"

namespace hypgeo {

struct DoublePoint {
  double s1, s2;  // 0 <= s1 < s2 < length of the primitive root
  Point point;    // owned copy in the half-open polygon
  int sign;       // +1 when the strand at s2 crosses the strand at s1 from right to left
  double dir1, dir2;  // tangent angles of the two strands at the point
};

struct IntersectionData {
  double length = 0;  // of the primitive root
  int power = 1;
  std::vector<DoublePoint> double_points;
  int count = 0;
};

struct ComplementAnalysis {
  int V = 0, E = 0, F = 0;
  int euler = 0;
  bool filling = false;
};

// How powers of a simple class are classified: by their image (simple) or strictly.
enum class PowerConvention { image, strict };

IntersectionData self_intersections(const SurfaceGroup& S, const ClosedGeodesic& geo,
                                    double tol = kDefaultTol);
bool is_simple(const SurfaceGroup& S, const ClosedGeodesic& geo,
               PowerConvention conv = PowerConvention::image);
ComplementAnalysis is_filling(const SurfaceGroup& S, const IntersectionData& data);

// Primitive element with the same axis whose power is geo.
Mat2 primitive_root(const ClosedGeodesic& geo);

}  // namespace hypgeo
