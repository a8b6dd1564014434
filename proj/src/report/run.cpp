#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "hypgeo/dynamics.hpp"
#include "hypgeo/error.hpp"
#include "hypgeo/random_models.hpp"
#include "hypgeo/report.hpp"
#include "hypgeo/topology.hpp"

namespace hypgeo {

using nlohmann::json;

namespace {

const std::map<std::string, json>& defaults() {
  static const std::map<std::string, json> d = {
      {"gen-surface", {{"genus", 2}, {"pairing", "opposite"}, {"surface_file", ""}}},
      {"census",
       {{"genus", 2}, {"pairing", "opposite"}, {"surface_file", ""}, {"L", 6.0}, {"bin_width", 0.5},
        {"pgt_grid", json::array()}}},
      {"closing-check",
       {{"genus", 2}, {"pairing", "opposite"}, {"surface_file", ""}, {"L", 8.0}, {"eta", 0.05},
        {"transverse_width", 0.4}, {"spacing", 0.12}, {"directions", 32}, {"edge_margin", 1e-3}}},
      {"mixing",
       {{"genus", 2}, {"pairing", "opposite"}, {"surface_file", ""}, {"eta", 0.5},
        {"box1", {0.0, 1.0, 0.0}}, {"box2", {0.2, 1.3, 1.0}},
        {"t_grid", {0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 12.0}}, {"trials", 1000000}}},
      {"net",
       {{"genus", 2}, {"pairing", "opposite"}, {"surface_file", ""}, {"r", 0.5}, {"box_fraction", 0.1},
        {"L", 10.0}, {"coverage_samples", 10000}, {"avoidance_L", {6.0, 8.0, 10.0}},
        {"transverse_directions", 8}, {"transverse_fraction", 0.05}}},
      {"cover", {{"genus", 2}, {"count", 20}, {"degrees", {2, 3}}}},
      {"bm", {{"n_values", {1, 2, 4, 8, 16}}, {"samples", 100}, {"L", 4.0}}},
      {"mc",
       {{"kind", "birthday"}, {"n", 10000}, {"alpha", 1.0}, {"transverse", "shift"}, {"shift", 1},
        {"table", json::array()}, {"ells", json::array()}, {"c_values", {0.5, 1.0, 2.0, 4.0}},
        {"trials", 100000}, {"allow_same_index", true}, {"n_values", {10, 100}}}},
  };
  return d;
}

json merged_params(const RunConfig& cfg) {
  auto it = defaults().find(cfg.command);
  if (it == defaults().end()) throw Error(ErrorKind::ConfigError, "unknown command " + cfg.command);
  json p = it->second;
  if (!cfg.params.is_object()) throw Error(ErrorKind::ConfigError, "parameters must be a JSON object");
  for (auto& [k, v] : cfg.params.items()) {
    if (!p.contains(k)) throw Error(ErrorKind::ConfigError, "unknown parameter '" + k + "' for " + cfg.command);
    p[k] = v;
  }
  return p;
}

template <class T>
T get(const json& p, const char* key) {
  try {
    return p.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("parameter '") + key + "': " + e.what());
  }
}

std::shared_ptr<const SurfaceGroup> load_surface(const json& p) {
  const std::string file = get<std::string>(p, "surface_file");
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read surface file " + file);
    std::stringstream ss;
    ss << in.rdbuf();
    return std::make_shared<SurfaceGroup>(from_text(ss.str()));
  }
  std::string pairing = p.contains("pairing") ? get<std::string>(p, "pairing") : "opposite";
  PairingScheme scheme;
  if (pairing == "opposite") scheme = PairingScheme::opposite;
  else if (pairing == "commutator") scheme = PairingScheme::commutator;
  else throw Error(ErrorKind::ConfigError, "pairing must be opposite or commutator");
  return std::make_shared<SurfaceGroup>(build_regular_surface(get<int>(p, "genus"), scheme));
}

Cell num(double x) { return x; }
Cell integer(std::int64_t x) { return x; }

// Groups sorted lengths that agree to `tol`.
std::vector<std::pair<double, std::size_t>> length_groups(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<double, std::size_t>> out;
  for (double x : v) {
    if (!out.empty() && x - out.back().first <= tol) ++out.back().second;
    else out.push_back({x, 1});
  }
  return out;
}

CensusOptions census_options(const RunConfig& cfg) {
  CensusOptions opt;
  if (cfg.tolerance) opt.length_tol = *cfg.tolerance;
  return opt;
}

void cmd_gen_surface(const RunConfig&, const json& p, ReportBundle& b) {
  auto S = load_surface(p);
  Table t{"surface/1", {"genus", "sides", "pairing", "area", "expected_area", "relator_defect",
                        "inradius", "circumradius", "generator_length"}, {}};
  const double expected = 4 * M_PI * (S->genus - 1);
  double glen = S->generators.empty() ? 0 : trace_to_length(std::abs(S->generators[0].trace()));
  t.add({integer(S->genus), integer(S->sides()),
         std::string(S->scheme == PairingScheme::opposite ? "opposite" : "commutator"), num(S->area),
         num(expected), num(relator_defect(*S)), num(S->inradius), num(S->circumradius), num(glen)});
  if (relator_defect(*S) > 1e-8) b.violations.push_back("relator defect above 1e-8");
  if (std::abs(S->area - expected) > 1e-6) b.violations.push_back("area differs from (4g-4)π");
  b.tables.push_back({"surface", t});
  b.files.push_back({"surface-group.json", to_text(*S)});
  std::ostringstream s;
  s << "surface genus " << S->genus << ", " << S->sides() << " sides, area " << format_double(S->area)
    << ", relator defect " << format_double(relator_defect(*S)) << "\n";
  b.summary = s.str();
}

void cmd_census(const RunConfig& cfg, const json& p, ReportBundle& b) {
  auto S = load_surface(p);
  const double L = get<double>(p, "L");
  CensusOptions opt = census_options(cfg);
  opt.bin_width = get<double>(p, "bin_width");
  CensusResult C = enumerate_closed_geodesics(*S, L, opt);
  const bool topo = S->is_polygon_surface();

  Table classes{"census-classes/1", {"index", "length", "trace", "word", "primitive", "power", "self_intersections",
                                     "simple", "filling", "V", "E", "F", "euler"}, {}};
  std::vector<char> simple(C.classes.size()), filling(C.classes.size());
  for (std::size_t i = 0; i < C.classes.size(); ++i) {
    const ClosedGeodesic& c = C.classes[i];
    std::int64_t count = -1, V = -1, E = -1, F = -1, chi = 0;
    bool simp = false, fill = false;
    if (topo) {
      IntersectionData d = self_intersections(*S, c);
      ComplementAnalysis a = is_filling(*S, d);
      count = d.count;
      simp = is_simple(*S, c);
      fill = a.filling;
      V = a.V, E = a.E, F = a.F, chi = a.euler;
      if (chi < 2 - 2 * S->genus) b.violations.push_back("complement Euler characteristic below 2-2g");
      if ((chi == 2 - 2 * S->genus) != fill) b.violations.push_back("Euler equality disagrees with filling");
      if (simp && fill) b.violations.push_back("simple class reported filling");
    }
    simple[i] = simp;
    filling[i] = fill;
    classes.add({integer(i), num(c.length), num(std::abs(c.matrix.trace())), word_string(c.word), c.primitive, integer(c.power), integer(count),
                 simp, fill, integer(V), integer(E), integer(F), integer(chi)});
  }

  Table bins{"census-bins/1", {"lo", "hi", "N", "N_simp", "N_nonsimple", "N_fill", "N_nonfill",
                               "frac_simp", "frac_fill"}, {}};
  for (const LengthBin& bin : C.bins) {
    std::int64_t n = 0, ns = 0, nf = 0;
    for (std::size_t i = 0; i < C.classes.size(); ++i) {
      double x = C.classes[i].length;
      bool last = &bin == &C.bins.back();
      if (x >= bin.lo && (x < bin.hi || (last && x <= bin.hi + 1e-9))) {
        ++n;
        ns += simple[i];
        nf += filling[i];
      }
    }
    if (static_cast<std::size_t>(n) != bin.count) b.violations.push_back("bin count disagrees with classes");
    bins.add({num(bin.lo), num(bin.hi), integer(n), integer(ns), integer(n - ns), integer(nf), integer(n - nf),
              num(n ? static_cast<double>(ns) / n : 0), num(n ? static_cast<double>(nf) / n : 0)});
  }

  std::vector<double> grid = get<std::vector<double>>(p, "pgt_grid");
  if (grid.empty()) {
    for (double x = 1; x < L - 1e-9; x += 1) grid.push_back(x);
    grid.push_back(L);
  }
  Table pgt{"pgt-ratio/1", {"L", "N", "N_simp", "N_fill", "ratio"}, {}};
  for (auto [x, ratio] : pgt_ratio_curve(C, grid)) {
    std::int64_t n = 0, ns = 0, nf = 0;
    for (std::size_t i = 0; i < C.classes.size(); ++i)
      if (C.classes[i].length <= x) ++n, ns += simple[i], nf += filling[i];
    pgt.add({num(x), integer(n), integer(ns), integer(nf), num(ratio)});
  }

  std::ostringstream s;
  s << "census " << C.surface_id << " L = " << format_double(L) << ": " << C.classes.size() << " classes, ball "
    << C.stats.ball_elements << " elements\n";
  s << "bin        N      N_simp N_fill\n";
  for (const auto& row : bins.rows)
    s << format_cell(row[0]) << "-" << format_cell(row[1]) << "  " << format_cell(row[2]) << "  "
      << format_cell(row[3]) << "  " << format_cell(row[5]) << "\n";
  s << "PGT ratio N(L)·L/e^L\n";
  for (const auto& row : pgt.rows) s << "  L = " << format_cell(row[0]) << "  " << format_cell(row[4]) << "\n";
  b.summary = s.str();
  b.tables.push_back({"classes", classes});
  b.tables.push_back({"bins", bins});
  b.tables.push_back({"pgt", pgt});
}

void cmd_closing(const RunConfig& cfg, const json& p, ReportBundle& b) {
  auto S = load_surface(p);
  const double L = get<double>(p, "L"), eta = get<double>(p, "eta");
  const double margin = get<double>(p, "edge_margin");
  auto boxes = closing_box_cover(*S, eta, get<double>(p, "transverse_width"), get<double>(p, "spacing"),
                                 get<int>(p, "directions"));
  const double br = closing_ball_radius(*S, L, boxes.front());
  auto ball = collect_ball(*S, br);
  auto hits = closing_census_union(*S, boxes, L, ball, br);
  CensusResult C = enumerate_closed_geodesics(*S, L + eta, census_options(cfg));
  std::vector<double> a, h;
  for (const auto& c : C.classes)
    if (c.length >= L - eta && c.length <= L + eta) a.push_back(c.length);
  for (const auto& x : hits) h.push_back(x.length);
  std::vector<double> all = a;
  all.insert(all.end(), h.begin(), h.end());
  Table t{"closing-diff/1", {"length", "census", "closing", "delta", "near_edge"}, {}};
  const double tol = 1e-7;
  for (auto [x, n] : length_groups(all, tol)) {
    (void)n;
    std::int64_t ca = 0, ch = 0;
    for (double y : a) ca += std::abs(y - x) <= tol;
    for (double y : h) ch += std::abs(y - x) <= tol;
    bool edge = std::min(std::abs(x - (L - eta)), std::abs(x - (L + eta))) < margin;
    t.add({num(x), integer(ca), integer(ch), integer(ch - ca), edge});
    if (ca != ch && !edge) b.violations.push_back("closing and word census disagree at length " + format_double(x));
  }
  std::ostringstream s;
  s << "closing check L = " << format_double(L) << " ± " << format_double(eta) << ": " << boxes.size()
    << " boxes, census " << a.size() << " classes, closing " << h.size() << " classes, "
    << b.violations.size() << " mismatched lengths\n";
  b.summary = s.str();
  b.tables.push_back({"diff", t});
}

UnitTangent tangent_from(const json& v) {
  auto a = v.get<std::vector<double>>();
  if (a.size() != 3 || !(a[1] > 0)) throw Error(ErrorKind::ConfigError, "box center is [x, y, angle] with y > 0");
  return frame_at(Point(a[0], a[1]), a[2]);
}

void cmd_mixing(const RunConfig& cfg, const json& p, ReportBundle& b) {
  auto S = load_surface(p);
  const double eta = get<double>(p, "eta");
  FlowBox B1 = make_box(*S, tangent_from(p.at("box1")), eta);
  FlowBox B2 = make_box(*S, tangent_from(p.at("box2")), eta);
  auto grid = get<std::vector<double>>(p, "t_grid");
  auto trials = get<std::size_t>(p, "trials");
  MixingCurve m = mixing_curve(*S, B1, B2, grid, trials, cfg.seed);
  Table t{"mixing/1", {"t", "estimate", "stderr", "trials", "mu1", "mu2", "product", "deviation", "kappa_fit"}, {}};
  for (const auto& e : m.points) {
    if (e.estimate < 0 || e.estimate > 1) b.violations.push_back("mixing estimate outside [0, 1]");
    t.add({num(e.t), num(e.estimate), num(e.stderr_), integer(e.trials), num(m.mu1), num(m.mu2),
           num(m.mu1 * m.mu2), num(e.estimate - m.mu1 * m.mu2), num(e.kappa_fit.value_or(NAN))});
  }
  std::ostringstream s;
  s << "mixing: mu(B1) = " << format_double(m.mu1) << ", mu(B2) = " << format_double(m.mu2)
    << ", box volume " << format_double(box_volume(B1)) << "\n";
  s << "t  estimate  stderr  deviation/stderr\n";
  for (const auto& e : m.points)
    s << format_double(e.t) << "  " << format_double(e.estimate) << "  " << format_double(e.stderr_) << "  "
      << format_double(e.stderr_ > 0 ? (e.estimate - m.mu1 * m.mu2) / e.stderr_ : 0) << "\n";
  b.summary = s.str();
  b.tables.push_back({"mixing", t});
}

void cmd_net(const RunConfig& cfg, const json& p, ReportBundle& b) {
  auto S = load_surface(p);
  const double r = get<double>(p, "r");
  DelaunayNet net = build_delaunay_net(*S, r, get<double>(p, "box_fraction"));
  NetCheck chk = check_net(*S, net, get<std::size_t>(p, "coverage_samples"), cfg.seed);
  Table edges{"net-edges/1", {"a", "b", "length", "mid_x", "mid_y"}, {}};
  for (std::size_t i = 0; i < net.edges.size(); ++i) {
    Point m = net.edge_boxes[i].center.base();
    edges.add({integer(net.edges[i].a), integer(net.edges[i].b), num(net.edges[i].length), num(m.real()),
               num(m.imag())});
  }
  Table summary{"net-check/1", {"r", "centers", "edges", "triangles", "euler", "min_edge", "max_edge",
                                "max_angle_deg", "max_degree", "degree_bound", "edge_constant", "perturbations",
                                "edge_violations", "angle_violations", "disjointness_violations",
                                "coverage_violations"}, {}};
  summary.add({num(r), integer(net.centers.size()), integer(net.edges.size()), integer(net.triangles.size()),
               integer(chk.euler_characteristic), num(chk.min_edge), num(chk.max_edge), num(chk.max_angle_deg),
               integer(net.max_degree), num(net.degree_bound), num(net.edge_constant), integer(net.perturbations),
               integer(chk.edge_violations), integer(chk.angle_violations), integer(chk.disjointness_violations),
               integer(chk.coverage_violations)});
  if (chk.edge_violations || chk.angle_violations || chk.disjointness_violations || chk.coverage_violations)
    b.violations.push_back("Delaunay net invariant violated");
  if (chk.euler_characteristic != 2 - 2 * S->genus) b.violations.push_back("net Euler characteristic is not 2-2g");
  if (net.max_degree > net.degree_bound) b.violations.push_back("net degree above the packing bound");

  const double L = get<double>(p, "L");
  CensusResult C = enumerate_closed_geodesics(*S, L, census_options(cfg));
  const double sys = C.classes.empty() ? 1.0 : C.classes.front().length;
  std::vector<Point> pts(net.centers.begin(), net.centers.end());
  auto pairs = transverse_pairs(*S, pts, get<int>(p, "transverse_directions"),
                                get<double>(p, "transverse_fraction") * sys);
  Table sound{"net-soundness/1", {"index", "length", "self_intersections", "filling", "transverse_pass",
                                  "net_pass"}, {}};
  std::int64_t bad = 0;
  for (std::size_t i = 0; i < C.classes.size(); ++i) {
    const ClosedGeodesic& c = C.classes[i];
    auto chords = chord_representatives(*S, c.matrix);
    IntersectionData d = self_intersections(*S, c);
    bool fill = is_filling(*S, d).filling;
    bool tp = passes_transverse_filter(*S, chords, pairs);
    bool np = passes_net_filter(*S, chords, net);
    if ((tp && d.count < 1) || (np && !fill)) ++bad;
    sound.add({integer(i), num(c.length), integer(d.count), fill, tp, np});
  }
  if (bad) b.violations.push_back(std::to_string(bad) + " classes break a filter implication");
  Table avoid{"avoidance/1", {"L", "fraction"}, {}};
  for (double x : get<std::vector<double>>(p, "avoidance_L"))
    avoid.add({num(x), num(box_avoidance_stats(*S, net.edge_boxes, C, x))});

  std::ostringstream s;
  s << "net r = " << format_double(r) << ": " << net.centers.size() << " centers, " << net.edges.size()
    << " edges, " << net.triangles.size() << " triangles, edges in [" << format_double(chk.min_edge) << ", "
    << format_double(chk.max_edge) << "], max angle " << format_double(chk.max_angle_deg) << " deg\n";
  s << "soundness over " << C.classes.size() << " classes: " << bad << " violations\n";
  for (const auto& row : avoid.rows) s << "avoidance L = " << format_cell(row[0]) << ": " << format_cell(row[1]) << "\n";
  b.summary = s.str();
  b.tables.push_back({"edges", edges});
  b.tables.push_back({"check", summary});
  b.tables.push_back({"soundness", sound});
  b.tables.push_back({"avoidance", avoid});
}

std::string perms_string(const std::vector<Perm>& perms) {
  std::string s;
  for (std::size_t i = 0; i < perms.size(); ++i) {
    if (i) s += ";";
    for (std::size_t j = 0; j < perms[i].size(); ++j) s += (j ? " " : "") + std::to_string(perms[i][j]);
  }
  return s;
}

void cmd_cover(const RunConfig& cfg, const json& p, ReportBundle& b) {
  auto base = std::make_shared<SurfaceGroup>(build_regular_surface(get<int>(p, "genus")));
  const int count = get<int>(p, "count");
  auto degrees = get<std::vector<int>>(p, "degrees");
  if (degrees.empty()) throw Error(ErrorKind::ConfigError, "cover needs at least one degree");
  const double base_sys = systole(*base, base->circumradius * 2 + 1);
  Table t{"covers/1", {"index", "degree", "perms", "genus", "expected_genus", "systole", "base_systole", "ok"}, {}};
  for (int i = 0; i < count; ++i) {
    int n = degrees[i % degrees.size()];
    CoverSpec spec = random_cover(base, n, cfg.seed + static_cast<std::uint64_t>(i));
    SurfaceGroup cov = build_cover(spec);
    int expected = 1 + n * (base->genus - 1);
    double sys = systole(cov, n * base_sys + 0.01);
    bool ok = cov.genus == expected && sys >= base_sys - 1e-6;
    if (!ok) b.violations.push_back("cover " + std::to_string(i) + " breaks the genus or systole bound");
    t.add({integer(i), integer(n), perms_string(spec.perms), integer(cov.genus), integer(expected), num(sys),
           num(base_sys), ok});
  }
  std::ostringstream s;
  s << count << " random covers of the genus-" << base->genus << " surface, " << b.violations.size()
    << " violations\n";
  b.summary = s.str();
  b.tables.push_back({"covers", t});
}

void cmd_bm(const RunConfig& cfg, const json& p, ReportBundle& b) {
  auto ns = get<std::vector<int>>(p, "n_values");
  const int samples = get<int>(p, "samples");
  const double L = get<double>(p, "L");
  Table rib{"ribbon/1", {"n", "sample", "genus", "faces", "resamples"}, {}};
  Table geo{"bm-geodesics/1", {"n", "word", "length", "trace", "power"}, {}};
  std::uint64_t k = 0;
  for (int n : ns)
    for (int s = 0; s < samples; ++s, ++k) {
      RibbonGraph G = random_ribbon_graph(n, cfg.seed * 1000003ULL + k);
      int g = ribbon_genus(G), F = ribbon_faces(G);
      if (2 * g - 2 > n - 1) b.violations.push_back("ribbon genus above (n+1)/2");
      rib.add({integer(n), integer(s), integer(g), integer(F), integer(G.resamples)});
      if (s == 0)
        for (const auto& x : bm_geodesics(G, L))
          geo.add({integer(n), x.word, num(x.length), num(x.trace), integer(x.power)});
    }
  std::ostringstream s;
  s << "ribbon graphs: " << rib.rows.size() << " samples; genus histogram per n\n";
  for (int n : ns) {
    std::map<std::int64_t, int> h;
    for (const auto& row : rib.rows)
      if (std::get<std::int64_t>(row[0]) == n) ++h[std::get<std::int64_t>(row[2])];
    s << "  n = " << n << ":";
    for (auto [g, c] : h) s << " g" << g << "×" << c;
    s << "\n";
  }
  b.summary = s.str();
  b.tables.push_back({"ribbon", rib});
  b.tables.push_back({"bm", geo});
}

void cmd_mc(const RunConfig& cfg, const json& p, ReportBundle& b) {
  const std::string kind = get<std::string>(p, "kind");
  std::ostringstream s;
  if (kind == "birthday") {
    BirthdayConfig bc;
    bc.n = get<std::int64_t>(p, "n");
    bc.alpha = get<double>(p, "alpha");
    const std::string tr = get<std::string>(p, "transverse");
    if (tr == "identity") bc.transverse = TransverseKind::identity;
    else if (tr == "shift") bc.transverse = TransverseKind::shift;
    else if (tr == "table") bc.transverse = TransverseKind::table;
    else throw Error(ErrorKind::ConfigError, "transverse must be identity, shift or table");
    bc.shift = get<std::int64_t>(p, "shift");
    bc.table = get<std::vector<std::int64_t>>(p, "table");
    bc.trials = get<std::size_t>(p, "trials");
    bc.allow_same_index = get<bool>(p, "allow_same_index");
    std::vector<std::pair<double, std::int64_t>> ells;
    for (auto e : get<std::vector<std::int64_t>>(p, "ells")) ells.push_back({NAN, e});
    if (ells.empty())
      for (double c : get<std::vector<double>>(p, "c_values"))
        ells.push_back({c, static_cast<std::int64_t>(std::ceil(c * std::sqrt(static_cast<double>(bc.n))))});
    Table t{"birthday/1", {"n", "ell", "c", "p_hat", "stderr", "poisson"}, {}};
    std::uint64_t k = 0;
    for (auto [c, ell] : ells) {
      bc.ell = ell;
      bc.seed = cfg.seed + k++;
      auto [ph, se] = birthday_mc(bc);
      double poisson = std::exp(-static_cast<double>(good_count(bc)) / bc.n * ell * (ell - 1) / bc.n);
      t.add({integer(bc.n), integer(ell), num(c), num(ph), num(se), num(poisson)});
      s << "birthday n = " << bc.n << " ell = " << ell << ": p = " << format_double(ph) << " ± "
        << format_double(se) << " (Poisson " << format_double(poisson) << ")\n";
    }
    b.tables.push_back({"birthday", t});
  } else if (kind == "coupon") {
    Table t{"coupon/1", {"n", "mean", "stderr", "n_harmonic", "ratio"}, {}};
    std::uint64_t k = 0;
    for (auto n : get<std::vector<std::int64_t>>(p, "n_values")) {
      auto [m, se] = coupon_collector_mc(n, get<std::size_t>(p, "trials"), cfg.seed + k++);
      double h = 0;
      for (std::int64_t i = 1; i <= n; ++i) h += 1.0 / i;
      t.add({integer(n), num(m), num(se), num(n * h), num(m / (n * h))});
      s << "coupon n = " << n << ": mean " << format_double(m) << " ± " << format_double(se) << " vs n·H_n "
        << format_double(n * h) << "\n";
    }
    b.tables.push_back({"coupon", t});
  } else {
    throw Error(ErrorKind::ConfigError, "mc kind must be birthday or coupon");
  }
  b.summary = s.str();
}

}  // namespace

json RunConfig::resolved() const {
  json j = {{"command", command}, {"seed", seed}, {"params", merged_params(*this)}};
  if (tolerance) j["tolerance"] = *tolerance;
  return j;
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"gen-surface", "census", "closing-check", "mixing",
                                             "net",         "cover",  "bm",            "mc"};
  return c;
}

RunConfig load_config(const std::string& command, const std::string& path) {
  RunConfig cfg;
  cfg.command = command;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read config " + path);
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("config parse: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::ConfigError, "config must be a JSON object");
  // either a flat parameter block or {"seed": .., "<command>": {...}}
  for (auto& [k, v] : j.items()) {
    if (k == "seed") cfg.seed = v.get<std::uint64_t>();
    else if (k == "threads") cfg.threads = v.get<int>();
    else if (k == "tolerance") cfg.tolerance = v.get<double>();
    else if (k == "out") cfg.out_dir = v.get<std::string>();
    else if (k == command && v.is_object()) {
      for (auto& [k2, v2] : v.items()) cfg.params[k2] = v2;
    } else if (std::find(commands().begin(), commands().end(), k) != commands().end()) {
      continue;  // block for another command
    } else {
      cfg.params[k] = v;
    }
  }
  return cfg;
}

ReportBundle run_command(const RunConfig& cfg) {
  const json p = merged_params(cfg);
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  ReportBundle b;
  if (cfg.command == "gen-surface") cmd_gen_surface(cfg, p, b);
  else if (cfg.command == "census") cmd_census(cfg, p, b);
  else if (cfg.command == "closing-check") cmd_closing(cfg, p, b);
  else if (cfg.command == "mixing") cmd_mixing(cfg, p, b);
  else if (cfg.command == "net") cmd_net(cfg, p, b);
  else if (cfg.command == "cover") cmd_cover(cfg, p, b);
  else if (cfg.command == "bm") cmd_bm(cfg, p, b);
  else if (cfg.command == "mc") cmd_mc(cfg, p, b);
  std::sort(b.violations.begin(), b.violations.end());
  b.violations.erase(std::unique(b.violations.begin(), b.violations.end()), b.violations.end());
  return b;
}

void write_bundle(const ReportBundle& b, const RunConfig& cfg) {
  if (cfg.out_dir.empty()) return;
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const json header = cfg.resolved();
  auto put = [&](const std::string& name, const std::string& body) {
    std::ofstream out(fs::path(cfg.out_dir) / name, std::ios::binary);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + name);
    out << body;
  };
  for (const auto& [name, t] : b.tables) {
    put(name + ".csv", to_csv(t, header));
    put(name + ".json", to_json(t, header).dump(1) + "\n");
  }
  for (const auto& [name, body] : b.files) put(name, body);
  std::string summary = "# config: " + header.dump() + "\n" + b.summary;
  if (!b.violations.empty()) {
    summary += "INVARIANT VIOLATIONS:\n";
    for (const auto& v : b.violations) summary += "  " + v + "\n";
  }
  put("summary.txt", summary);
}

int run(const RunConfig& cfg, std::string* message) {
  try {
    ReportBundle b = run_command(cfg);
    write_bundle(b, cfg);
    if (message) {
      *message = b.summary;
      for (const auto& v : b.violations) *message += "invariant violation: " + v + "\n";
    }
    return b.ok() ? 0 : 1;
  } catch (const Error& e) {
    if (message) *message = cfg.command + ": " + e.what() + "\n";
    return e.kind() == ErrorKind::ConfigError ? 2 : 3;
  } catch (const std::exception& e) {
    if (message) *message = cfg.command + ": " + e.what() + "\n";
    return 3;
  }
}

}  // namespace hypgeo
