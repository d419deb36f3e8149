#include "solver.hpp"

#include <map>
#include <queue>
#include <tuple>

namespace vcle::oracle {

using kula::MoveKind;
using kula::Tile;

namespace {

struct Node {
  int x, y, o;
  unsigned mask;
  auto key() const { return std::make_tuple(x, y, o, mask); }
};

}  // namespace

std::optional<Solution> solve_level(const kula::LevelSpec& level, const kula::PlayerPose& start) {
  std::vector<std::pair<int, int>> objects;
  std::vector<bool> is_key;
  for (const auto& [cell, kind] : level.objects) {
    objects.emplace_back(cell.x, cell.y);
    is_key.push_back(kind == kula::ObjectKind::Key);
  }
  auto object_at = [&](int x, int y) {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i] == std::make_pair(x, y)) return static_cast<int>(i);
    return -1;
  };
  const int dxs[4] = {0, 1, 0, -1};
  const int dys[4] = {-1, 0, 1, 0};

  std::map<std::tuple<int, int, int, unsigned>, std::pair<std::tuple<int, int, int, unsigned>, std::pair<MoveKind, int>>> parent;
  std::queue<Node> q;
  Node s{start.x, start.y, static_cast<int>(start.orientation), 0};
  q.push(s);
  parent[s.key()] = {s.key(), {MoveKind::Forward, 0}};
  while (!q.empty()) {
    Node n = q.front();
    q.pop();
    for (MoveKind m : {MoveKind::Forward, MoveKind::LookLeft, MoveKind::LookRight, MoveKind::JumpForward}) {
      Node next = n;
      int frames = 0;
      bool won = false;
      if (m == MoveKind::LookLeft || m == MoveKind::LookRight) {
        next.o = (n.o + (m == MoveKind::LookLeft ? 3 : 1)) % 4;
        frames = 15;
      } else {
        int dist = m == MoveKind::Forward ? 1 : 2;
        next.x = n.x + dxs[n.o] * dist;
        next.y = n.y + dys[n.o] * dist;
        Tile t = level.tile(next.x, next.y);
        if (t == Tile::Void || t == Tile::Spike) continue;
        frames = m == MoveKind::Forward ? 30 : 75;
        int obj = object_at(next.x, next.y);
        if (obj >= 0 && !(n.mask & (1u << obj))) {
          next.mask |= 1u << obj;
          frames += 15;
        }
        if (t == Tile::Goal) {
          bool all_keys = true;
          for (std::size_t i = 0; i < objects.size(); ++i)
            if (is_key[i] && !(next.mask & (1u << i))) all_keys = false;
          won = all_keys;
        }
      }
      if (parent.count(next.key())) continue;
      parent[next.key()] = {n.key(), {m, frames + 1}};
      if (won) {
        Solution sol;
        auto k = next.key();
        while (k != s.key()) {
          auto [prev, step] = parent[k];
          sol.moves.insert(sol.moves.begin(), step.first);
          sol.frames += step.second;
          k = prev;
        }
        return sol;
      }
      q.push(next);
    }
  }
  return std::nullopt;
}

}  // namespace vcle::oracle
