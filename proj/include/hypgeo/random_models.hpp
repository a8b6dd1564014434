#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hypgeo/exec.hpp"
#include "hypgeo/mat2.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

// Trivalent ribbon graph on 2n vertices; half-edges 3i, 3i+1, 3i+2 sit at vertex i.
struct RibbonGraph {
  int n_vertices = 0;
  Perm sigma;  // vertex rotations
  Perm alpha;  // edge pairing
  bool connected = true;
  int resamples = 0;  // disconnected draws rejected before this one
};

RibbonGraph make_ribbon_graph(const Perm& alpha);  // canonical rotations
RibbonGraph random_ribbon_graph(int n, std::uint64_t seed);
bool ribbon_connected(const RibbonGraph& G);
int ribbon_faces(const RibbonGraph& G);  // cycles of alpha∘sigma
int ribbon_genus(const RibbonGraph& G);

struct BmGeodesic {
  std::string word;         // L/R turns, canonical rotation
  std::vector<int> path;    // departing half-edges
  double length;
  double trace;
  int power = 1;
};

Mat2 lr_matrix(const std::string& word);
// Closed non-backtracking edge paths with trace <= 2 cosh(L/2), one per cyclic rotation.
std::vector<BmGeodesic> bm_geodesics(const RibbonGraph& G, double L);

enum class TransverseKind { identity, shift, table };

struct BirthdayConfig {
  std::int64_t n = 0;
  std::int64_t ell = 0;
  double alpha = 1;
  TransverseKind transverse = TransverseKind::shift;
  std::int64_t shift = 1;
  std::vector<std::int64_t> table;  // image of good object k, for TransverseKind::table
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  bool allow_same_index = true;  // whether i = j counts as a detection
};

std::int64_t good_count(const BirthdayConfig& cfg);
// Image of good object x under the transverse map.
std::int64_t transverse_image(const BirthdayConfig& cfg, std::int64_t x);
void validate(const BirthdayConfig& cfg);

std::pair<double, double> birthday_mc(const BirthdayConfig& cfg, Exec exec = Exec::parallel);
std::pair<double, double> coupon_collector_mc(std::int64_t n, std::size_t trials, std::uint64_t seed,
                                              Exec exec = Exec::parallel);

}  // namespace hypgeo
