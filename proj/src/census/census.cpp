#include "hypgeo/census.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "hypgeo/ball.hpp"
#include "hypgeo/error.hpp"

namespace hypgeo {

namespace {

struct Candidate {
  Mat2 g;
  Word word;
  double length;
  GeodesicLine axis;
  int cls = -1;
  int power = 1;
};

bool word_less(const Word& x, const Word& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return x < y;
}

// Groups candidates sharing an oriented axis; cells of 1e-5 rad in endpoint angles.
class AxisIndex {
 public:
  explicit AxisIndex(double tol) : tol_(tol) {}
  int find_or_add(const GeodesicLine& line) {
    double a = boundary_angle(line.repel), b = boundary_angle(line.attract);
    auto ka = cell(a), kb = cell(b);
    for (std::int64_t da = -1; da <= 1; ++da)
      for (std::int64_t db = -1; db <= 1; ++db) {
        auto it = map_.find(pack(wrap(ka + da), wrap(kb + db)));
        if (it == map_.end()) continue;
        for (int g : it->second) {
          if (ang(a, angles_[g].first) <= tol_ && ang(b, angles_[g].second) <= tol_) return g;
        }
      }
    int g = static_cast<int>(angles_.size());
    angles_.push_back({a, b});
    map_[pack(ka, kb)].push_back(g);
    return g;
  }

 private:
  static constexpr double kCell = 1e-5;
  static constexpr std::int64_t kRing = static_cast<std::int64_t>(2 * M_PI / kCell) + 1;
  static double ang(double x, double y) {
    double d = std::abs(x - y);
    return std::min(d, 2 * M_PI - d);
  }
  static std::int64_t cell(double a) { return wrap(static_cast<std::int64_t>(std::floor((a + M_PI) / kCell))); }
  static std::int64_t wrap(std::int64_t k) { return ((k % kRing) + kRing) % kRing; }
  static std::uint64_t pack(std::int64_t a, std::int64_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }
  double tol_;
  std::vector<std::pair<double, double>> angles_;
  std::unordered_map<std::uint64_t, std::vector<int>> map_;
};

std::vector<LengthBin> make_bins(const std::vector<ClosedGeodesic>& classes, double L, double width) {
  std::vector<LengthBin> bins;
  if (width <= 0) return bins;
  for (double lo = 0; lo < L - 1e-12; lo += width) bins.push_back({lo, std::min(lo + width, L), 0});
  for (const auto& c : classes) {
    for (auto& b : bins) {
      bool last = &b == &bins.back();
      if (c.length >= b.lo && (c.length < b.hi || (last && c.length <= b.hi + 1e-9))) {
        ++b.count;
        break;
      }
    }
  }
  return bins;
}

void sort_classes(std::vector<ClosedGeodesic>& classes) {
  std::stable_sort(classes.begin(), classes.end(), [](const ClosedGeodesic& x, const ClosedGeodesic& y) {
    if (std::abs(x.length - y.length) > 1e-9) return x.length < y.length;
    return word_less(x.word, y.word);
  });
}

CensusResult cover_census(const SurfaceGroup& S, double L, const CensusOptions& opt) {
  const CoverSpec& spec = S.cover->spec;
  CensusResult base = enumerate_closed_geodesics(*spec.base, L, opt);
  CensusResult out;
  out.surface_id = surface_id(S);
  out.L_max = L;
  out.stats = base.stats;
  const auto& trans = S.cover->transversal;
  for (const ClosedGeodesic& c : base.classes) {
    if (!c.primitive) continue;
    Perm p = word_perm(spec.perms, c.word);
    std::vector<char> done(spec.degree, 0);
    for (int i = 0; i < spec.degree; ++i) {
      if (done[i]) continue;
      int k = 0;
      for (int j = i; !done[j]; j = p[j]) {
        done[j] = 1;
        ++k;
      }
      for (int m = 1; m * k * c.length <= L + opt.length_tol; ++m) {
        Word w = trans[i];
        for (int r = 0; r < m * k; ++r) w.insert(w.end(), c.word.begin(), c.word.end());
        Word ti = inverse(trans[i]);
        w.insert(w.end(), ti.begin(), ti.end());
        w = free_reduce(w);
        ClosedGeodesic cg;
        cg.word = rewrite_in_cover(S, w);
        cg.matrix = evaluate(S.generators, cg.word).normalized().canonical();
        cg.length = trace_to_length(cg.matrix.trace());
        cg.power = m;
        cg.primitive = m == 1;
        cg.axis = axis(cg.matrix);
        out.classes.push_back(std::move(cg));
      }
    }
  }
  sort_classes(out.classes);
  out.bins = make_bins(out.classes, L, opt.bin_width);
  return out;
}

}  // namespace

std::string surface_id(const SurfaceGroup& S) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_text(S)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "genus%d-%016llx", S.genus, static_cast<unsigned long long>(h));
  return buf;
}

CensusResult enumerate_closed_geodesics(const SurfaceGroup& S, double L, const CensusOptions& opt) {
  if (!(L > 0)) throw Error(ErrorKind::ConfigError, "census length must be positive");
  if (!S.is_polygon_surface()) return cover_census(S, L, opt);

  const Point o = S.basepoint;
  const Point b = opt.basepoint.value_or(o);
  double Rb = 0;
  for (const Point& v : S.domain.vertices) Rb = std::max(Rb, hyp_distance(b, v));
  const double ob = hyp_distance(o, b);
  // d(b, g b) <= l + 2 d(b, axis) <= L + 2 Rb for a lift whose axis meets F
  const double keep = L + 2 * Rb + 1e-6;
  const double radius = keep + 2 * ob;
  const double trace_cap = 2 * std::cosh(0.5 * (L + opt.length_tol));

  std::vector<Candidate> cands;
  BallWalker walker(S, radius, opt.exec, opt.max_elements);
  walker.run([&](const Mat2& g, std::uint32_t node, double) {
    double tr = std::abs(g.trace());
    if (tr > trace_cap || tr <= 2 + 1e-9) return;
    if (ob > 0 && hyp_distance(b, g.apply(b)) > keep) return;
    GeodesicLine ax = axis(g);
    if (!axis_meets_domain(S, ax, opt.inclusion_tol)) return;
    cands.push_back({g.normalized(), walker.word(node), trace_to_length(tr), ax});
  });

  CensusResult out;
  out.surface_id = surface_id(S);
  out.L_max = L;
  out.stats.ball_elements = walker.size();
  out.stats.candidates = cands.size();
  out.stats.ball_radius = radius;

  const OrbitKeyer keyer(o);
  std::unordered_map<std::uint64_t, std::vector<int>> index;
  for (std::size_t i = 0; i < cands.size(); ++i) index[keyer.key(cands[i].g.apply(o))].push_back(i);
  auto lookup = [&](const Mat2& g) -> int {
    Point z = g.apply(o);
    std::uint64_t keys[9];
    keyer.probe_keys(z, keys);
    for (auto k : keys) {
      auto it = index.find(k);
      if (it == index.end()) continue;
      for (int i : it->second)
        if (psl_distance(cands[i].g, g) <= 1e-7 * std::max(1.0, g.max_abs())) return i;
    }
    return -1;
  };

  // primitive roots: shortest candidate on each oriented axis
  AxisIndex axes(opt.axis_tol);
  std::vector<int> group(cands.size());
  std::vector<double> root_len;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    int grp = axes.find_or_add(cands[i].axis);
    if (grp >= static_cast<int>(root_len.size())) root_len.push_back(cands[i].length);
    root_len[grp] = std::min(root_len[grp], cands[i].length);
    group[i] = grp;
  }
  for (std::size_t i = 0; i < cands.size(); ++i) {
    double r = cands[i].length / root_len[group[i]];
    int p = static_cast<int>(std::lround(r));
    if (p < 1 || std::abs(cands[i].length - p * root_len[group[i]]) > opt.length_tol * p + 1e-9)
      throw Error(ErrorKind::ToleranceCollision, "length on a shared axis is not a multiple of the root");
    cands[i].power = p;
  }

  std::vector<int> order(cands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    if (cands[x].length != cands[y].length) return cands[x].length < cands[y].length;
    return word_less(cands[x].word, cands[y].word);
  });

  for (int start : order) {
    if (cands[start].cls >= 0) continue;
    const int cls = static_cast<int>(out.classes.size());
    auto reps = chord_representatives(S, cands[start].g, opt.inclusion_tol);
    int best = start;
    for (const ChordRep& r : reps) {
      int i = lookup(r.element);
      if (i < 0) {
        double disp = hyp_distance(b, r.element.apply(b));
        throw Error(disp > keep - 1e-3 ? ErrorKind::BallTooSmall : ErrorKind::ToleranceCollision,
                    "conjugate lift missing from the enumerated ball");
      }
      if (cands[i].cls >= 0 && cands[i].cls != cls)
        throw Error(ErrorKind::ToleranceCollision, "lift shared by two classes");
      if (std::abs(cands[i].length - cands[start].length) > opt.length_tol)
        throw Error(ErrorKind::ToleranceCollision, "conjugate lifts disagree in length");
      cands[i].cls = cls;
      if (word_less(cands[i].word, cands[best].word)) best = i;
    }
    if (cands[start].cls != cls)
      throw Error(ErrorKind::ToleranceCollision, "class seed not among its own chords");
    const Candidate& c = cands[best];
    ClosedGeodesic cg;
    cg.word = c.word;
    cg.matrix = c.g.canonical();
    cg.length = c.length;
    cg.power = c.power;
    cg.primitive = c.power == 1;
    cg.axis = c.axis;
    out.classes.push_back(std::move(cg));
  }
  sort_classes(out.classes);
  out.bins = make_bins(out.classes, L, opt.bin_width);
  return out;
}

std::size_t count_in_band(const CensusResult& C, double L, double eta) {
  if (L + eta > C.L_max + 1e-12)
    throw Error(ErrorKind::BandExceedsCensus, "band reaches past the census length");
  std::size_t n = 0;
  for (const auto& c : C.classes)
    if (c.length >= L - eta && c.length <= L + eta) ++n;
  return n;
}

std::vector<std::pair<double, double>> pgt_ratio_curve(const CensusResult& C,
                                                       const std::vector<double>& grid) {
  std::vector<std::pair<double, double>> out;
  for (double L : grid) {
    if (L > C.L_max + 1e-12)
      throw Error(ErrorKind::BandExceedsCensus, "grid point past the census length");
    std::size_t n = 0;
    for (const auto& c : C.classes)
      if (c.length <= L) ++n;
    out.emplace_back(L, static_cast<double>(n) * L / std::exp(L));
  }
  return out;
}

double systole(const SurfaceGroup& S, double search_len) {
  if (!(search_len > 0)) throw Error(ErrorKind::ConfigError, "search length must be positive");
  CensusOptions opt;
  opt.bin_width = 0;
  CensusResult C = enumerate_closed_geodesics(S, search_len, opt);
  if (C.classes.empty())
    throw Error(ErrorKind::NoGeodesicInRange, "no closed geodesic of length <= " + std::to_string(search_len));
  return C.classes.front().length;
}

}  // namespace hypgeo
