#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "hypgeo/error.hpp"
#include "hypgeo/random_models.hpp"

namespace hypgeo {

RibbonGraph make_ribbon_graph(const Perm& alpha) {
  const int m = static_cast<int>(alpha.size());
  if (m == 0 || m % 6 != 0) throw Error(ErrorKind::ConfigError, "half-edge count must be a multiple of 6");
  for (int h = 0; h < m; ++h)
    if (alpha[h] < 0 || alpha[h] >= m || alpha[h] == h || alpha[alpha[h]] != h)
      throw Error(ErrorKind::ConfigError, "edge pairing is not a fixed-point-free involution");
  RibbonGraph G;
  G.n_vertices = m / 3;
  G.sigma.resize(m);
  for (int h = 0; h < m; ++h) G.sigma[h] = 3 * (h / 3) + (h % 3 + 1) % 3;
  G.alpha = alpha;
  G.connected = ribbon_connected(G);
  return G;
}

bool ribbon_connected(const RibbonGraph& G) {
  const int m = static_cast<int>(G.alpha.size());
  std::vector<char> seen(m, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int h = stack.back();
    stack.pop_back();
    for (int x : {G.sigma[h], G.alpha[h]})
      if (!seen[x]) {
        seen[x] = 1;
        ++count;
        stack.push_back(x);
      }
  }
  return count == m;
}

RibbonGraph random_ribbon_graph(int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorKind::ConfigError, "ribbon graph needs n >= 1");
  std::mt19937_64 rng(seed);
  const int m = 6 * n;
  std::vector<int> h(m);
  for (int rejected = 0;; ++rejected) {
    std::iota(h.begin(), h.end(), 0);
    std::shuffle(h.begin(), h.end(), rng);
    Perm alpha(m);
    for (int k = 0; k < m; k += 2) {
      alpha[h[k]] = h[k + 1];
      alpha[h[k + 1]] = h[k];
    }
    RibbonGraph G = make_ribbon_graph(alpha);
    if (G.connected) {
      G.resamples = rejected;
      return G;
    }
  }
}

int ribbon_faces(const RibbonGraph& G) {
  const int m = static_cast<int>(G.alpha.size());
  std::vector<char> seen(m, 0);
  int faces = 0;
  for (int h = 0; h < m; ++h) {
    if (seen[h]) continue;
    ++faces;
    for (int x = h; !seen[x]; x = G.alpha[G.sigma[x]]) seen[x] = 1;
  }
  return faces;
}

int ribbon_genus(const RibbonGraph& G) {
  if (!ribbon_connected(G)) throw Error(ErrorKind::Disconnected, "ribbon graph is disconnected");
  const int V = G.n_vertices, E = 3 * V / 2, F = ribbon_faces(G);
  const int chi = V - E + F;
  if (chi > 2 || (2 - chi) % 2 != 0)
    throw Error(ErrorKind::InvariantViolation, "Euler characteristic is not 2 - 2g");
  return (2 - chi) / 2;
}

Mat2 lr_matrix(const std::string& word) {
  Mat2 m;
  const Mat2 Lm{1, 1, 0, 1}, Rm{1, 0, 1, 1};
  for (char c : word) {
    if (c == 'L') m = m * Lm;
    else if (c == 'R') m = m * Rm;
    else throw Error(ErrorKind::ConfigError, "turn words use L and R only");
  }
  return m;
}

namespace {

// Index of the lexicographically least rotation.
std::size_t least_rotation(const std::vector<int>& s) {
  const std::size_t n = s.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      int a = s[(r + k) % n], b = s[(best + k) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  return best;
}

int period(const std::vector<int>& s) {
  const int n = static_cast<int>(s.size());
  for (int p = 1; p <= n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (int k = p; k < n && ok; ++k) ok = s[k] == s[k - p];
    if (ok) return p;
  }
  return n;
}

}  // namespace

std::vector<BmGeodesic> bm_geodesics(const RibbonGraph& G, double L) {
  if (!ribbon_connected(G)) throw Error(ErrorKind::Disconnected, "ribbon graph is disconnected");
  if (!(L > 0)) throw Error(ErrorKind::ConfigError, "length bound must be positive");
  const double cap = 2 * std::cosh(0.5 * L) * (1 + 1e-12);
  const int m = static_cast<int>(G.alpha.size());
  const Mat2 Lm{1, 1, 0, 1}, Rm{1, 0, 1, 1};
  std::vector<BmGeodesic> out;

  std::vector<int> path;
  std::string word;
  // depth-first over turn sequences; partial traces only grow since L and R are nonnegative
  auto dfs = [&](auto&& self, int h0, int h, const Mat2& prod, int runL, int runR) -> void {
    const int arrive = G.alpha[h];
    for (int turn = 0; turn < 2; ++turn) {
      const int next = turn == 0 ? G.sigma[arrive] : G.sigma[G.sigma[arrive]];
      const Mat2 p = prod * (turn == 0 ? Lm : Rm);
      const int rl = turn == 0 ? runL + 1 : 0, rr = turn == 0 ? 0 : runR + 1;
      const int depth = static_cast<int>(word.size()) + 1;
      // a pure prefix L^k can still reach trace k + 2 once the other letter appears
      const bool pure = rl == depth || rr == depth;
      if (pure ? depth + 2 > cap : p.trace() > cap) continue;
      word.push_back(turn == 0 ? 'L' : 'R');
      if (next == h0 && !pure) {
        std::size_t r = least_rotation(path);
        if (path[r] == h0 && r == 0) {
          BmGeodesic g;
          g.word = word;
          g.path = path;
          g.trace = p.trace();
          g.length = trace_to_length(g.trace);
          g.power = static_cast<int>(path.size()) / period(path);
          out.push_back(std::move(g));
        }
      }
      path.push_back(next);
      self(self, h0, next, p, rl, rr);
      path.pop_back();
      word.pop_back();
    }
  };
  for (int h0 = 0; h0 < m; ++h0) {
    path.assign(1, h0);
    word.clear();
    dfs(dfs, h0, h0, Mat2::identity(), 0, 0);
  }
  std::stable_sort(out.begin(), out.end(), [](const BmGeodesic& a, const BmGeodesic& b) {
    if (a.length != b.length) return a.length < b.length;
    return a.path < b.path;
  });
  return out;
}

}  // namespace hypgeo
