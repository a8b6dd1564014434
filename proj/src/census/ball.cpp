#include "hypgeo/ball.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "hypgeo/error.hpp"

namespace hypgeo {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

std::uint64_t ring_size(std::int64_t k) {
  double s = kTwoPi * std::sinh((k + 1) * OrbitKeyer::kCell) / OrbitKeyer::kCell;
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(s)));
}

std::uint64_t pack(std::int64_t k, std::uint64_t m) { return (static_cast<std::uint64_t>(k) << 40) | m; }

}  // namespace

OrbitKeyer::OrbitKeyer(Point center) : to_i_(frame_at(center, 0).frame.inverse()) {}

void OrbitKeyer::polar(Point z, double& rho, double& theta) const {
  Point w = to_i_.apply(z);
  rho = hyp_distance(Point(0, 1), w);
  Point dsk = (w - Point(0, 1)) / (w + Point(0, 1));
  theta = std::arg(dsk);
  if (theta < 0) theta += kTwoPi;
}

std::uint64_t OrbitKeyer::key(Point z) const {
  double rho, theta;
  polar(z, rho, theta);
  auto k = static_cast<std::int64_t>(std::floor(rho / kCell));
  std::uint64_t K = ring_size(k);
  auto m = static_cast<std::uint64_t>(std::floor(theta / kTwoPi * K)) % K;
  return pack(k, m);
}

void OrbitKeyer::probe_keys(Point z, std::uint64_t out[9]) const {
  double rho, theta;
  polar(z, rho, theta);
  auto k0 = static_cast<std::int64_t>(std::floor(rho / kCell));
  int n = 0;
  for (std::int64_t k = k0 - 1; k <= k0 + 1; ++k) {
    if (k < 0) {
      for (int r = 0; r < 3; ++r) out[n++] = ~0ULL;
      continue;
    }
    std::uint64_t K = ring_size(k);
    auto m = static_cast<std::int64_t>(std::floor(theta / kTwoPi * K));
    for (std::int64_t dm = -1; dm <= 1; ++dm) {
      std::int64_t mm = ((m + dm) % static_cast<std::int64_t>(K) + K) % K;
      out[n++] = pack(k, static_cast<std::uint64_t>(mm));
    }
  }
}

BallWalker::BallWalker(const SurfaceGroup& S, double radius, Exec exec, std::size_t max_elements)
    : S_(S), radius_(radius), exec_(exec), max_elements_(max_elements) {
  if (!S.is_polygon_surface()) throw Error(ErrorKind::ConfigError, "ball walk needs a polygon surface");
}

Word BallWalker::word(std::uint32_t node) const {
  Word w;
  while (node != 0) {
    w.push_back(S_.domain.side_letter[side_[node]]);
    node = parent_[node];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

void BallWalker::run(const Visit& visit) {
  const Point o = S_.basepoint;
  const OrbitKeyer keyer(o);
  const int ns = S_.sides();
  const double cut = radius_ + 1e-9;

  parent_.assign(1, 0);
  side_.assign(1, 0);
  visit(Mat2::identity(), 0, 0.0);

  struct Layer {
    std::vector<Mat2> elems;
    std::vector<std::uint32_t> ids;
    std::unordered_map<std::uint64_t, std::uint32_t> cells;  // key -> position in elems
  };
  Layer prev, cur, next;
  cur.elems.push_back(Mat2::identity());
  cur.ids.push_back(0);
  cur.cells[keyer.key(o)] = 0;

  struct Child {
    Mat2 g;
    double disp;
    bool valid;
  };
  const std::size_t chunk = 1 << 15;
  std::vector<Child> slots;

  auto find_in = [&](const Layer& L, Point z, const std::uint64_t* keys) -> bool {
    for (int q = 0; q < 9; ++q) {
      auto it = L.cells.find(keys[q]);
      if (it == L.cells.end()) continue;
      double d = hyp_distance(L.elems[it->second].apply(o), z);
      if (d < 1e-6) return true;
      if (d < 1.0) throw Error(ErrorKind::ToleranceCollision, "orbit points neither equal nor separated");
    }
    return false;
  };

  while (!cur.elems.empty()) {
    next = Layer{};
    for (std::size_t base = 0; base < cur.elems.size(); base += chunk) {
      const std::size_t count = std::min(chunk, cur.elems.size() - base);
      slots.assign(count * ns, Child{});
      auto expand = [&](std::size_t i) {
        const std::size_t idx = base + i;
        const std::uint32_t id = cur.ids[idx];
        const int back = id == 0 ? -1 : S_.domain.side_pairing[side_[id]];
        for (int s = 0; s < ns; ++s) {
          Child& c = slots[i * ns + s];
          if (s == back) continue;
          c.g = cur.elems[idx] * S_.side_transforms[s];
          c.disp = hyp_distance(o, c.g.apply(o));
          c.valid = c.disp <= cut;
        }
      };
      if (exec_ == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) expand(i);
      } else {
        for (std::size_t i = 0; i < count; ++i) expand(i);
      }
      for (std::size_t i = 0; i < count; ++i) {
        for (int s = 0; s < ns; ++s) {
          const Child& c = slots[i * ns + s];
          if (!c.valid) continue;
          Point z = c.g.apply(o);
          std::uint64_t keys[9];
          keyer.probe_keys(z, keys);
          if (find_in(cur, z, keys) || find_in(next, z, keys) || find_in(prev, z, keys)) continue;
          if (parent_.size() >= max_elements_)
            throw Error(ErrorKind::BudgetExceeded, "ball exceeds " + std::to_string(max_elements_) + " elements");
          auto id = static_cast<std::uint32_t>(parent_.size());
          parent_.push_back(cur.ids[base + i]);
          side_.push_back(static_cast<std::uint8_t>(s));
          next.cells[keyer.key(z)] = static_cast<std::uint32_t>(next.elems.size());
          next.elems.push_back(c.g);
          next.ids.push_back(id);
          visit(c.g, id, c.disp);
        }
      }
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
}

std::vector<BallElement> collect_ball(const SurfaceGroup& S, double radius, Exec exec) {
  BallWalker walker(S, radius, exec);
  std::vector<BallElement> out;
  walker.run([&](const Mat2& g, std::uint32_t node, double disp) {
    out.push_back({g, walker.word(node), disp});
  });
  return out;
}

}  // namespace hypgeo
