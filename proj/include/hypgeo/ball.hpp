#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "hypgeo/exec.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

// Cell of an orbit point in geodesic polar coordinates about a fixed center; cells are
// about `kCell` wide in both directions, far below the orbit separation.
struct OrbitKeyer {
  static constexpr double kCell = 0.1;
  explicit OrbitKeyer(Point center);
  std::uint64_t key(Point z) const;
  // The 9 cells that can hold a point within a hair of z.
  void probe_keys(Point z, std::uint64_t out[9]) const;

 private:
  void polar(Point z, double& rho, double& theta) const;
  Mat2 to_i_;
};

// Breadth-first walk over the tiles g·F with d(o, g·o) <= radius. Complete because F is
// the Dirichlet polygon of o: every tile on a shortest tile path to g·F stays in the ball.
class BallWalker {
 public:
  using Visit = std::function<void(const Mat2& g, std::uint32_t node, double displacement)>;

  BallWalker(const SurfaceGroup& S, double radius, Exec exec = Exec::parallel,
             std::size_t max_elements = 60'000'000);
  void run(const Visit& visit);
  Word word(std::uint32_t node) const;
  std::size_t size() const { return parent_.size(); }
  double radius() const { return radius_; }

 private:
  const SurfaceGroup& S_;
  double radius_;
  Exec exec_;
  std::size_t max_elements_;
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint8_t> side_;
};

struct BallElement {
  Mat2 element;
  Word word;
  double displacement;
};
std::vector<BallElement> collect_ball(const SurfaceGroup& S, double radius, Exec exec = Exec::parallel);

}  // namespace hypgeo
