#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hypgeo/mat2.hpp"

namespace hypgeo {

// Signed 1-based generator indices; -k is the inverse of generator k.
using Word = std::vector<int>;

Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);
Word inverse(const Word& w);
std::string word_string(const Word& w);
Word parse_word(const std::string& s);
Mat2 evaluate(const std::vector<Mat2>& gens, const Word& w);

using Perm = std::vector<int>;  // 0-based images

Perm perm_inverse(const Perm& p);
// Right action of a word on sheets: i·(x y) = (i·x)·y.
int act(const std::vector<Perm>& perms, int sheet, const Word& w);
Perm word_perm(const std::vector<Perm>& perms, const Word& w);
bool is_transitive(const std::vector<Perm>& perms, int n);

enum class PairingScheme { opposite, commutator };

struct FundamentalPolygon {
  std::vector<Point> vertices;   // counterclockwise
  std::vector<int> side_pairing; // partner of each side
  std::vector<int> side_letter;  // letter of h_s, the element carrying F across side s
};

struct CoverInfo;

struct SurfaceGroup {
  int genus = 0;
  std::vector<Mat2> generators;
  Word relator;
  std::vector<Word> relators;  // relator first; covers add the lifted relators
  FundamentalPolygon domain;   // for covers: the base polygon
  Point basepoint{0, 1};
  PairingScheme scheme = PairingScheme::opposite;

  // Derived from the fields above.
  std::vector<Mat2> side_transforms;
  std::vector<Mat2> side_frames_inv;   // inverse line frames of the sides, F on the left
  std::vector<int> vertex_cycle_rep;   // smallest vertex index in each vertex's cycle
  std::vector<Mat2> neighbors;         // nontrivial elements whose tile touches F
  std::vector<Mat2> local_elements;    // d(o, g o) <= 2R + 3, identity included
  double circumradius = 0;             // max distance basepoint -> vertex
  double inradius = 0;
  double diameter = 0;
  double area = 0;                     // from triangulating the polygon

  std::shared_ptr<const CoverInfo> cover;

  bool is_polygon_surface() const { return cover == nullptr; }
  int sides() const { return static_cast<int>(domain.vertices.size()); }
};

struct CoverSpec {
  std::shared_ptr<const SurfaceGroup> base;
  int degree = 1;
  std::vector<Perm> perms;  // one per base generator
};

struct CoverInfo {
  CoverSpec spec;
  std::vector<Word> transversal;       // sheet i reached from sheet 0
  std::vector<Word> generator_words;   // cover generators as base words
  std::vector<std::vector<int>> edge_generator;  // [sheet][letter-1]: index, or -1 on tree edges
};

// Rewrites a base word lying in the cover subgroup over the cover's generators.
Word rewrite_in_cover(const SurfaceGroup& cover, const Word& base_word);

SurfaceGroup build_regular_surface(int genus, PairingScheme scheme = PairingScheme::opposite);
SurfaceGroup build_cover(const CoverSpec& spec);
CoverSpec random_cover(std::shared_ptr<const SurfaceGroup> base, int n, std::uint64_t seed,
                       std::size_t max_attempts = 1000000);

// Signed distance of z to side s (positive outside F).
double side_distance(const SurfaceGroup& S, int side, Point z);
double max_side_distance(const SurfaceGroup& S, Point z, int* argmax = nullptr);
bool in_domain(const SurfaceGroup& S, Point z, double tol = kDefaultTol);

struct Reduction {
  Point point;
  Mat2 element;  // element * original = point
};
// Move z into the closed fundamental polygon.
Reduction reduce_point(const SurfaceGroup& S, Point z);
UnitTangent reduce_tangent(const SurfaceGroup& S, const UnitTangent& v);

// Surface distance between two points of the closed polygon; exact up to 3.
double surface_distance(const SurfaceGroup& S, Point z, Point w);

// Relator words evaluate to the identity in PSL2.
double relator_defect(const SurfaceGroup& S);
double polygon_area(const SurfaceGroup& S);

double systole(const SurfaceGroup& S, double search_len);

std::string to_text(const SurfaceGroup& S);
SurfaceGroup from_text(const std::string& text);

}  // namespace hypgeo
