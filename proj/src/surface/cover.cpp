#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <random>

#include "hypgeo/error.hpp"
#include "hypgeo/surface.hpp"

namespace hypgeo {

namespace {

void check_spec(const CoverSpec& spec) {
  if (!spec.base || !spec.base->is_polygon_surface())
    throw Error(ErrorKind::ConfigError, "cover base must be a polygon surface");
  const int n = spec.degree;
  if (n < 1) throw Error(ErrorKind::ConfigError, "cover degree must be >= 1");
  if (spec.perms.size() != spec.base->generators.size())
    throw Error(ErrorKind::ConfigError, "one permutation per base generator required");
  for (const Perm& p : spec.perms) {
    Perm q = p;
    std::sort(q.begin(), q.end());
    for (int i = 0; i < n; ++i)
      if (static_cast<int>(q.size()) != n || q[i] != i)
        throw Error(ErrorKind::ConfigError, "not a permutation of the sheets");
  }
  for (const Word& r : spec.base->relators) {
    Perm rp = word_perm(spec.perms, r);
    for (int i = 0; i < n; ++i)
      if (rp[i] != i) throw Error(ErrorKind::RelatorViolation, "relator acts nontrivially on sheets");
  }
  if (!is_transitive(spec.perms, n)) throw Error(ErrorKind::NotTransitive, "sheets not connected");
}

Word rewrite(const std::vector<std::vector<int>>& edge_gen, const std::vector<Perm>& perms,
             const Word& w, int start, int* end) {
  Word out;
  int cur = start;
  for (int y : w) {
    if (y > 0) {
      int g = edge_gen[cur][y - 1];
      if (g >= 0) out.push_back(g + 1);
      cur = act(perms, cur, Word{y});
    } else {
      int prev = act(perms, cur, Word{y});
      int g = edge_gen[prev][-y - 1];
      if (g >= 0) out.push_back(-(g + 1));
      cur = prev;
    }
  }
  if (end) *end = cur;
  return free_reduce(out);
}

}  // namespace

Word rewrite_in_cover(const SurfaceGroup& cover, const Word& base_word) {
  if (cover.is_polygon_surface()) return base_word;
  int end = 0;
  Word w = rewrite(cover.cover->edge_generator, cover.cover->spec.perms, base_word, 0, &end);
  if (end != 0) throw Error(ErrorKind::ConfigError, "word does not lie in the cover subgroup");
  return w;
}

SurfaceGroup build_cover(const CoverSpec& spec) {
  check_spec(spec);
  const SurfaceGroup& B = *spec.base;
  const int n = spec.degree;
  const int ng = static_cast<int>(B.generators.size());

  std::vector<int> letters;
  for (int x = 1; x <= ng; ++x) {
    letters.push_back(x);
    letters.push_back(-x);
  }
  std::vector<Word> trans(n);
  std::vector<char> seen(n, 0);
  // tree edge (sheet, positive letter) carrying the transversal
  std::map<std::pair<int, int>, bool> tree;
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  while (!q.empty()) {
    int i = q.front();
    q.pop();
    for (int x : letters) {
      int j = act(spec.perms, i, Word{x});
      if (seen[j]) continue;
      seen[j] = 1;
      trans[j] = trans[i];
      trans[j].push_back(x);
      if (x > 0)
        tree[{i, x}] = true;
      else
        tree[{j, -x}] = true;
      q.push(j);
    }
  }

  auto info = std::make_shared<CoverInfo>();
  info->spec = spec;
  info->transversal = trans;
  info->edge_generator.assign(n, std::vector<int>(ng, -1));
  SurfaceGroup S;
  for (int i = 0; i < n; ++i) {
    for (int x = 1; x <= ng; ++x) {
      if (tree.count({i, x})) continue;
      int j = act(spec.perms, i, Word{x});
      Word w = trans[i];
      w.push_back(x);
      Word tj = inverse(trans[j]);
      w.insert(w.end(), tj.begin(), tj.end());
      w = free_reduce(w);
      info->edge_generator[i][x - 1] = static_cast<int>(info->generator_words.size());
      info->generator_words.push_back(w);
      S.generators.push_back(evaluate(B.generators, w).normalized().canonical());
    }
  }

  for (int i = 0; i < n; ++i)
    for (const Word& r : B.relators) S.relators.push_back(rewrite(info->edge_generator, spec.perms, r, i, nullptr));
  S.relator = S.relators.front();
  S.genus = 1 + n * (B.genus - 1);
  S.domain = B.domain;
  S.basepoint = B.basepoint;
  S.scheme = B.scheme;
  S.cover = info;
  return S;
}

CoverSpec random_cover(std::shared_ptr<const SurfaceGroup> base, int n, std::uint64_t seed,
                       std::size_t max_attempts) {
  if (!base || !base->is_polygon_surface())
    throw Error(ErrorKind::ConfigError, "cover base must be a polygon surface");
  if (n < 1) throw Error(ErrorKind::ConfigError, "cover degree must be >= 1");
  std::mt19937_64 rng(seed);
  const std::size_t ng = base->generators.size();
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    CoverSpec spec{base, n, {}};
    for (std::size_t k = 0; k < ng; ++k) {
      Perm p(n);
      std::iota(p.begin(), p.end(), 0);
      std::shuffle(p.begin(), p.end(), rng);
      spec.perms.push_back(std::move(p));
    }
    bool ok = true;
    for (const Word& r : base->relators) {
      Perm rp = word_perm(spec.perms, r);
      for (int i = 0; i < n && ok; ++i) ok = rp[i] == i;
    }
    if (ok && is_transitive(spec.perms, n)) return spec;
  }
  throw Error(ErrorKind::RejectionBudgetExceeded,
              "no admissible permutation tuple after " + std::to_string(max_attempts) + " attempts");
}

}  // namespace hypgeo
