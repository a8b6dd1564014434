#include <algorithm>
#include <cmath>
#include <vector>

#include "hypgeo/error.hpp"
#include "hypgeo/topology.hpp"

namespace hypgeo {

ComplementAnalysis is_filling(const SurfaceGroup& S, const IntersectionData& data) {
  ComplementAnalysis out;
  const int V = data.count;
  out.V = V;
  if (V == 0) {
    // one closed curve, no vertices: its two sides are the traced faces
    out.E = 0;
    out.F = 2;
    out.euler = 2;
    out.filling = false;
    return out;
  }
  struct Occ {
    double s;
    double shift;  // position after pushing each strand off a multiple point
    int vertex;
    int strand;
  };
  // Strands through a multiple point are moved sideways by an amount proportional to
  // their parameter; this resolves it into transverse double points in a consistent way.
  auto shift = [](double s_self, double a_self, double s_other, double a_other) {
    double nx = -std::sin(a_self), ny = std::cos(a_self);
    double mx = -std::sin(a_other), my = std::cos(a_other);
    double dn = std::cos(a_self) * mx + std::sin(a_self) * my;
    return (s_other - s_self * (nx * mx + ny * my)) / dn;
  };
  std::vector<Occ> occ;
  for (int v = 0; v < V; ++v) {
    const DoublePoint& d = data.double_points[v];
    if (d.sign != 1 && d.sign != -1) throw Error(ErrorKind::NonTransverseInput, "crossing without sign");
    if (std::abs(std::sin(d.dir1 - d.dir2)) < 1e-9)
      throw Error(ErrorKind::NonTransverseInput, "tangential crossing");
    occ.push_back({d.s1, shift(d.s1, d.dir1, d.s2, d.dir2), v, 0});
    occ.push_back({d.s2, shift(d.s2, d.dir2, d.s1, d.dir1), v, 1});
  }
  const double tie = 1e-9;
  std::sort(occ.begin(), occ.end(), [&](const Occ& a, const Occ& b) {
    if (std::abs(a.s - b.s) > tie) return a.s < b.s;
    return a.shift < b.shift;
  });
  const int E = 2 * V;
  // half-edge 2k: edge k leaving occurrence k; 2k+1: edge k arriving at occurrence k+1
  std::vector<int> alpha(2 * E), sigma(2 * E);
  std::vector<int> at_out(E), at_in(E);
  for (int k = 0; k < E; ++k) {
    alpha[2 * k] = 2 * k + 1;
    alpha[2 * k + 1] = 2 * k;
    at_out[k] = 2 * k;
    at_in[(k + 1) % E] = 2 * k + 1;
  }
  std::vector<int> first(V, -1), second(V, -1);
  for (int k = 0; k < E; ++k) (occ[k].strand == 0 ? first : second)[occ[k].vertex] = k;
  for (int v = 0; v < V; ++v) {
    int a = first[v], b = second[v];
    int ring[4];
    if (data.double_points[v].sign > 0) {
      ring[0] = at_out[a]; ring[1] = at_out[b]; ring[2] = at_in[a]; ring[3] = at_in[b];
    } else {
      ring[0] = at_out[a]; ring[1] = at_in[b]; ring[2] = at_in[a]; ring[3] = at_out[b];
    }
    for (int q = 0; q < 4; ++q) sigma[ring[q]] = ring[(q + 1) % 4];
  }
  std::vector<char> seen(2 * E, 0);
  int faces = 0;
  for (int h = 0; h < 2 * E; ++h) {
    if (seen[h]) continue;
    ++faces;
    for (int x = h; !seen[x]; x = sigma[alpha[x]]) seen[x] = 1;
  }
  out.E = E;
  out.F = faces;
  out.euler = V - E + faces;
  out.filling = out.euler == 2 - 2 * S.genus;
  return out;
}

}  // namespace hypgeo
