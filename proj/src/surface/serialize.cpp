#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "hypgeo/error.hpp"
#include "hypgeo/surface.hpp"
#include "internal.hpp"

namespace hypgeo {

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string ints(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s + "]";
}

void emit(std::ostringstream& out, const SurfaceGroup& S, const std::string& ind) {
  out << "{\n";
  out << ind << "  \"schema\": \"hypgeo-surface/1\",\n";
  out << ind << "  \"kind\": \"" << (S.is_polygon_surface() ? "polygon" : "cover") << "\",\n";
  out << ind << "  \"genus\": " << S.genus << ",\n";
  out << ind << "  \"pairing\": \""
      << (S.scheme == PairingScheme::opposite ? "opposite" : "commutator") << "\",\n";
  out << ind << "  \"generators\": [";
  for (std::size_t i = 0; i < S.generators.size(); ++i) {
    const Mat2& m = S.generators[i];
    out << (i ? ",\n" : "\n") << ind << "    [" << num(m.a) << ", " << num(m.b) << ", " << num(m.c)
        << ", " << num(m.d) << "]";
  }
  out << "\n" << ind << "  ],\n";
  out << ind << "  \"relator\": " << ints(S.relator) << ",\n";
  out << ind << "  \"relators\": [";
  for (std::size_t i = 0; i < S.relators.size(); ++i) out << (i ? ", " : "") << ints(S.relators[i]);
  out << "],\n";
  out << ind << "  \"polygon\": {\n" << ind << "    \"vertices\": [";
  const auto& V = S.domain.vertices;
  for (std::size_t i = 0; i < V.size(); ++i)
    out << (i ? ", " : "") << "[" << num(V[i].real()) << ", " << num(V[i].imag()) << "]";
  out << "],\n";
  out << ind << "    \"side_pairing\": " << ints(S.domain.side_pairing) << ",\n";
  out << ind << "    \"side_letter\": " << ints(S.domain.side_letter) << "\n" << ind << "  },\n";
  out << ind << "  \"basepoint\": [" << num(S.basepoint.real()) << ", " << num(S.basepoint.imag())
      << "]";
  if (!S.is_polygon_surface()) {
    const CoverSpec& c = S.cover->spec;
    out << ",\n" << ind << "  \"cover\": {\n";
    out << ind << "    \"degree\": " << c.degree << ",\n";
    out << ind << "    \"perms\": [";
    for (std::size_t i = 0; i < c.perms.size(); ++i) out << (i ? ", " : "") << ints(c.perms[i]);
    out << "],\n" << ind << "    \"base\": ";
    emit(out, *c.base, ind + "    ");
    out << "\n" << ind << "  }";
  }
  out << "\n" << ind << "}";
}

SurfaceGroup parse(const nlohmann::json& j) {
  if (j.value("schema", "") != "hypgeo-surface/1")
    throw Error(ErrorKind::ConfigError, "unknown surface schema");
  SurfaceGroup S;
  std::vector<Mat2> gens;
  for (const auto& g : j.at("generators"))
    gens.push_back({g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>(),
                    g.at(3).get<double>()});
  if (j.at("kind") == "cover") {
    const auto& c = j.at("cover");
    CoverSpec spec;
    spec.base = std::make_shared<SurfaceGroup>(parse(c.at("base")));
    spec.degree = c.at("degree").get<int>();
    for (const auto& p : c.at("perms")) spec.perms.push_back(p.get<Perm>());
    S = build_cover(spec);
    if (gens.size() != S.generators.size())
      throw Error(ErrorKind::ConfigError, "cover generators do not match permutation data");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (psl_distance(gens[i], S.generators[i]) > 1e-9)
        throw Error(ErrorKind::ConfigError, "cover generators do not match permutation data");
      S.generators[i] = gens[i];
    }
    return S;
  }
  S.genus = j.at("genus").get<int>();
  S.scheme = j.value("pairing", "opposite") == "commutator" ? PairingScheme::commutator
                                                            : PairingScheme::opposite;
  S.generators = gens;
  S.relator = j.at("relator").get<Word>();
  for (const auto& r : j.at("relators")) S.relators.push_back(r.get<Word>());
  const auto& poly = j.at("polygon");
  for (const auto& v : poly.at("vertices"))
    S.domain.vertices.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
  S.domain.side_pairing = poly.at("side_pairing").get<std::vector<int>>();
  S.domain.side_letter = poly.at("side_letter").get<std::vector<int>>();
  const auto& b = j.at("basepoint");
  S.basepoint = Point(b.at(0).get<double>(), b.at(1).get<double>());
  detail::finalize_polygon_surface(S);
  return S;
}

}  // namespace

std::string to_text(const SurfaceGroup& S) {
  std::ostringstream out;
  emit(out, S, "");
  out << "\n";
  return out.str();
}

SurfaceGroup from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("surface document: ") + e.what());
  }
  try {
    return parse(j);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ConfigError, std::string("surface document: ") + e.what());
  }
}

}  // namespace hypgeo
