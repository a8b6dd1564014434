#include <algorithm>
#include <cmath>
#include <map>

#include "doctest.h"
#include "hypgeo/census.hpp"
#include "hypgeo/error.hpp"
#include "oracles/word_enum.hpp"

using namespace hypgeo;

namespace {

const SurfaceGroup& genus2() {
  static const SurfaceGroup S = build_regular_surface(2);
  return S;
}

const CensusResult& census72() {
  static const CensusResult C = enumerate_closed_geodesics(genus2(), 7.2);
  return C;
}

// Length multiset keyed at 1e-6 resolution.
std::map<long, int> length_counts(const CensusResult& C) {
  std::map<long, int> m;
  for (const auto& c : C.classes) m[std::lround(c.length * 1e6)]++;
  return m;
}

// Index of the census class that `g` is conjugate to, or -1.
int find_class(const SurfaceGroup& S, const CensusResult& C, const Mat2& g) {
  const double len = trace_to_length(std::abs(g.trace()));
  Mat2 c = conjugate_into_domain(S, g);
  std::vector<ChordRep> reps = chord_representatives(S, c * g * c.inverse());
  for (std::size_t i = 0; i < C.classes.size(); ++i) {
    if (std::abs(C.classes[i].length - len) > 1e-7) continue;
    for (const ChordRep& r : reps)
      if (psl_distance(r.element.canonical(), C.classes[i].matrix.canonical()) <= 1e-7) return static_cast<int>(i);
    // the stored matrix need not be one of the chord reps; try its reps too
    Mat2 d = conjugate_into_domain(S, C.classes[i].matrix);
    for (const ChordRep& q : chord_representatives(S, d * C.classes[i].matrix * d.inverse()))
      for (const ChordRep& r : reps)
        if (psl_distance(r.element.canonical(), q.element.canonical()) <= 1e-7) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

TEST_CASE("systole band") {
  CensusResult C = enumerate_closed_geodesics(genus2(), 3.1);
  REQUIRE(!C.classes.empty());
  for (const auto& c : C.classes) CHECK(c.length == doctest::Approx(3.05714).epsilon(1e-5));
  oracle::ShortClasses brute = oracle::shortest_classes(genus2(), 8, 2);
  CHECK(C.classes.size() == brute.classes);
  CHECK(C.classes.size() == 24);
  CHECK(count_in_band(C, 3.05, 0.05) == 24);
  CHECK(count_in_band(C, 1.0, 0.5) == 0);
  CHECK(count_in_band(C, 1.55, 1.55) == C.classes.size());
  try {
    count_in_band(C, 3.1, 0.05);
    FAIL("expected BandExceedsCensus");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BandExceedsCensus);
  }
  CHECK(enumerate_closed_geodesics(genus2(), 3.0).classes.empty());
}

TEST_CASE("census multiplicities against brute-force word enumeration") {
  const CensusResult& C = census72();
  for (const auto& [key, count] : length_counts(C)) {
    double len = key * 1e-6;
    if (len > 7.2) continue;
    CAPTURE(len);
    oracle::ShortClasses brute = oracle::classes_at_trace(genus2(), 8, 2, 2 * std::cosh(len / 2), 1e-5);
    CHECK(brute.classes == static_cast<std::size_t>(count));
  }
}

TEST_CASE("class invariants") {
  const CensusResult& C = census72();
  // sorted by length; ties within 1e-9 are ordered by word
  for (std::size_t i = 1; i < C.classes.size(); ++i) CHECK(C.classes[i].length >= C.classes[i - 1].length - 1e-9);
  for (const auto& c : C.classes) {
    CHECK(std::abs(c.length - 2 * std::acosh(std::abs(c.matrix.trace()) / 2)) <= 1e-9);
    CHECK(std::abs(c.length - trace_to_length(std::abs(evaluate(genus2().generators, c.word).trace()))) <= 1e-9);
    CHECK(c.primitive == (c.power == 1));
    CHECK(is_freely_reduced(c.word));
  }
}

TEST_CASE("powers") {
  const CensusResult& C = census72();
  std::size_t short_classes = 0, squares = 0;
  for (const auto& c : C.classes) {
    if (c.length <= C.L_max / 2) ++short_classes;
    if (c.power % 2 == 0) ++squares;
  }
  CHECK(short_classes == 24);
  CHECK(squares == short_classes);
  for (const auto& c : C.classes) {
    if (c.length > C.L_max / 2) continue;
    Mat2 sq = c.matrix * c.matrix;
    int k = find_class(genus2(), C, sq);
    REQUIRE(k >= 0);
    CHECK(C.classes[k].power == 2 * c.power);
    CHECK(C.classes[k].length == doctest::Approx(2 * c.length).epsilon(1e-12));
  }
  // length = power x root length, and the root is present
  auto counts = length_counts(C);
  for (const auto& c : C.classes)
    if (!c.primitive) CHECK(counts.count(std::lround(c.length / c.power * 1e6)) == 1);
}

TEST_CASE("closed under inversion") {
  const CensusResult& C = census72();
  std::vector<int> hit(C.classes.size(), 0);
  for (const auto& c : C.classes) {
    int k = find_class(genus2(), C, c.matrix.inverse());
    REQUIRE(k >= 0);
    CHECK(C.classes[k].length == doctest::Approx(c.length));
    hit[k]++;
  }
  // inversion is a bijection on classes
  for (int h : hit) CHECK(h == 1);
}

TEST_CASE("basepoint independence and serial/parallel agreement") {
  CensusOptions moved;
  moved.basepoint = Point(0.07, 1.05);
  CensusResult A = enumerate_closed_geodesics(genus2(), 6.2, moved);
  CensusResult B = enumerate_closed_geodesics(genus2(), 6.2);
  REQUIRE(A.classes.size() == B.classes.size());
  for (std::size_t i = 0; i < A.classes.size(); ++i) CHECK(std::abs(A.classes[i].length - B.classes[i].length) <= 1e-6);

  CensusOptions serial;
  serial.exec = Exec::serial;
  CensusResult S = enumerate_closed_geodesics(genus2(), 6.2, serial);
  REQUIRE(S.classes.size() == B.classes.size());
  for (std::size_t i = 0; i < S.classes.size(); ++i) {
    CHECK(S.classes[i].word == B.classes[i].word);
    CHECK(S.classes[i].length == B.classes[i].length);
  }
}

TEST_CASE("pgt ratio curve") {
  const CensusResult& C = census72();
  auto r = pgt_ratio_curve(C, {2.0, 3.0, 4.0, 7.0});
  CHECK(r[0].second == 0);
  CHECK(r[1].second == 0);
  CHECK(r[2].second == doctest::Approx(24 * 4.0 / std::exp(4.0)));
  for (std::size_t i = 2; i < r.size(); ++i) {
    CHECK(std::isfinite(r[i].second));
    CHECK(r[i].second > 0);
  }
  CHECK_THROWS_AS(pgt_ratio_curve(C, {8.0}), Error);
}

TEST_CASE("bins") {
  const CensusResult& C = census72();
  std::size_t total = 0;
  for (const auto& b : C.bins) total += b.count;
  CHECK(total == C.classes.size());
}

TEST_CASE("covers lift the census") {
  auto base = std::make_shared<const SurfaceGroup>(genus2());
  SurfaceGroup cover = build_cover(random_cover(base, 2, 41));
  CensusResult C = enumerate_closed_geodesics(cover, 6.2);
  CensusResult B = enumerate_closed_geodesics(genus2(), 6.2);
  // every cover class projects to a base class of the same length
  auto base_counts = length_counts(B);
  for (const auto& c : C.classes) CHECK(base_counts.count(std::lround(c.length * 1e6)) == 1);
  // each base class of length l <= 3.1 has either two lifts of length l or one of length 2l
  std::size_t sys_lifts = 0;
  for (const auto& c : C.classes)
    if (c.length < 3.1) ++sys_lifts;
  CHECK(sys_lifts % 2 == 0);
  CHECK(sys_lifts <= 48);
}
