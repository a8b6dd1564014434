#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypgeo/exec.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

struct ClosedGeodesic {
  Word word;
  Mat2 matrix;
  double length = 0;
  bool primitive = true;
  int power = 1;
  GeodesicLine axis;
};

struct LengthBin {
  double lo, hi;
  std::size_t count;
};

struct CensusStats {
  std::size_t ball_elements = 0;
  std::size_t candidates = 0;
  double ball_radius = 0;
};

struct CensusResult {
  std::string surface_id;
  double L_max = 0;
  std::vector<ClosedGeodesic> classes;
  std::vector<LengthBin> bins;
  CensusStats stats;
};

struct CensusOptions {
  Exec exec = Exec::parallel;
  std::size_t max_elements = 60'000'000;
  double length_tol = 1e-7;
  double axis_tol = 1e-6;
  double inclusion_tol = 1e-7;  // slack for "axis meets the closed polygon"
  double bin_width = 0.5;
  std::optional<Point> basepoint;  // pruning center; the polygon center when unset
};

// A lift of a class whose axis meets the closed polygon, with element = C⁻¹·g₀·C.
struct ChordRep {
  Mat2 element;
  Mat2 conjugator;
  std::vector<int> sides;  // sides whose closed segment the axis meets
};

// Conjugator C such that C·g·C⁻¹ has axis through the polygon.
Mat2 conjugate_into_domain(const SurfaceGroup& S, const Mat2& g);
bool axis_meets_domain(const SurfaceGroup& S, const GeodesicLine& line, double tol);
// All lifts meeting the closed polygon, found by conjugating across crossed sides.
// g's axis must meet the polygon.
std::vector<ChordRep> chord_representatives(const SurfaceGroup& S, const Mat2& g,
                                            double tol = 1e-7, std::size_t max_reps = 10000);

std::string surface_id(const SurfaceGroup& S);

CensusResult enumerate_closed_geodesics(const SurfaceGroup& S, double L,
                                        const CensusOptions& opt = {});
std::size_t count_in_band(const CensusResult& C, double L, double eta);
std::vector<std::pair<double, double>> pgt_ratio_curve(const CensusResult& C,
                                                       const std::vector<double>& grid);

}  // namespace hypgeo
