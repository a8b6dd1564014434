#pragma once

#include "hypgeo/surface.hpp"

namespace hypgeo::detail {

// Recomputes every derived field of a polygon surface from generators and domain.
void finalize_polygon_surface(SurfaceGroup& S);

// Tiles around vertex k of F, walking first across side k: crossed sides in order and
// the vertex of F met on each new tile.
struct VertexWalk {
  std::vector<int> sides;
  std::vector<int> vertices;
  std::vector<Mat2> tiles;
};
VertexWalk walk_vertex(const SurfaceGroup& S, int k);

// Elements g with d(o, g o) <= radius, found by a small breadth-first tile search.
std::vector<Mat2> small_ball(const SurfaceGroup& S, double radius);

}  // namespace hypgeo::detail
