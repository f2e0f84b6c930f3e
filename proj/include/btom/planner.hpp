#pragma once

#include <deque>
#include <optional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "btom/world.hpp"

namespace btom {

// Distance fields on the relaxed grid: locked doors treated as open, keys
// ignored; walls and boxes stay solid. The relaxation is independent of door
// state, so the fields are constants of the map.
class RelaxedDistances {
 public:
  explicit RelaxedDistances(const GridMap& map) : map_(map) {
    for (const auto& g : map.gems) {
      cell_field_.push_back(bfs({g.cell}));
      std::vector<Cell> sources{g.cell};
      for (Direction d : {Direction::Up, Direction::Down, Direction::Left, Direction::Right}) {
        Cell c = step_cell(g.cell, d);
        if (passable(c)) sources.push_back(c);
      }
      pickup_field_.push_back(bfs(sources));
    }
  }

  // Maze distance from `from` to the gem's cell; -1 if unreachable.
  int to_gem_cell(int gem, Cell from) const { return at(cell_field_[gem], from); }

  // Maze distance from `from` to the nearest cell the gem is collectable
  // from (its own cell or a 4-neighbour); -1 if unreachable.
  int to_pickup_position(int gem, Cell from) const { return at(pickup_field_[gem], from); }

 private:
  bool passable(Cell c) const {
    if (!map_.in_bounds(c) || map_.is_wall(c)) return false;
    for (const auto& b : map_.boxes)
      if (b.cell == c) return false;
    return true;
  }

  std::vector<int> bfs(const std::vector<Cell>& sources) const {
    std::vector<int> dist(static_cast<size_t>(map_.width) * map_.height, -1);
    std::deque<Cell> q;
    for (Cell s : sources) {
      if (!passable(s)) continue;
      dist[idx(s)] = 0;
      q.push_back(s);
    }
    while (!q.empty()) {
      Cell c = q.front();
      q.pop_front();
      for (Direction d : {Direction::Up, Direction::Down, Direction::Left, Direction::Right}) {
        Cell n = step_cell(c, d);
        if (passable(n) && dist[idx(n)] < 0) {
          dist[idx(n)] = dist[idx(c)] + 1;
          q.push_back(n);
        }
      }
    }
    return dist;
  }

  size_t idx(Cell c) const { return static_cast<size_t>(c.y) * map_.width + c.x; }
  int at(const std::vector<int>& field, Cell c) const {
    return map_.in_bounds(c) ? field[idx(c)] : -1;
  }

  const GridMap& map_;
  std::vector<std::vector<int>> cell_field_;
  std::vector<std::vector<int>> pickup_field_;
};

struct PlannerConfig {
  enum class Mode { Exact, Rths };
  Mode mode = Mode::Exact;
  // Rths only: node expansions allowed per cost estimate.
  int rths_budget = 100;
};

// Optimal plan costs (unit action costs) and action values for one map.
// optimal_cost caches per (state, goal); the Rths mode additionally learns
// per-state lower bounds LRTA*-style.
class Planner {
 public:
  explicit Planner(const GridMap& map, PlannerConfig cfg = {})
      : map_(map), cfg_(cfg), relaxed_(map) {}

  // Admissible lower bound: relaxed maze distance to the nearest pickup
  // position of the goal gem, plus one for the pickup itself.
  std::optional<int> relaxed_distance(const WorldState& state, int goal_gem) const {
    if (state.gem_collected(goal_gem)) return 0;
    int d = relaxed_.to_pickup_position(goal_gem, state.agent);
    if (d < 0) return std::nullopt;
    return d + 1;
  }

  std::optional<int> optimal_cost(const WorldState& state, int goal_gem) {
    if (goal_gem < 0 || goal_gem >= static_cast<int>(map_.gems.size()))
      throw UnknownGem("gem index out of range: " + std::to_string(goal_gem));
    CacheKey key{state.canonical(), goal_gem};
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::optional<int> cost = astar(state, goal_gem,
                                    cfg_.mode == PlannerConfig::Mode::Exact ? -1 : cfg_.rths_budget);
    cache_.emplace(std::move(key), cost);
    return cost;
  }

  std::optional<int> q_value(const WorldState& state, const Action& action, int goal_gem) {
    if (!action_legal(state, action, map_))
      throw IllegalAction("q_value of illegal action: " + action_token(action, map_));
    auto c = optimal_cost(transition(state, action, map_), goal_gem);
    if (!c) return std::nullopt;
    return 1 + *c;
  }

  const RelaxedDistances& relaxed_fields() const { return relaxed_; }
  size_t cache_size() const { return cache_.size(); }
  const GridMap& map() const { return map_; }
  const PlannerConfig& config() const { return cfg_; }

 private:
  struct CacheKey {
    std::string state;
    int goal;
    bool operator==(const CacheKey&) const = default;
  };
  struct CacheKeyHash {
    size_t operator()(const CacheKey& k) const {
      return std::hash<std::string>()(k.state) * 31 + std::hash<int>()(k.goal);
    }
  };

  int heuristic(const std::string& canon, const WorldState& s, int goal_gem) const {
    auto h = relaxed_distance(s, goal_gem);
    if (!h) return -1;  // provably unreachable
    if (cfg_.mode == PlannerConfig::Mode::Rths) {
      auto it = learned_.find(CacheKey{canon, goal_gem});
      if (it != learned_.end() && it->second > *h) return it->second;
    }
    return *h;
  }

  // Exact A* when budget < 0. With a budget, expansion stops early and the
  // result is the best admissible lower bound on the frontier, recorded in
  // the learned table so later estimates from the same region improve.
  std::optional<int> astar(const WorldState& start, int goal_gem, int budget) {
    if (start.gem_collected(goal_gem)) return 0;
    std::string canon0 = start.canonical();
    int h0 = heuristic(canon0, start, goal_gem);
    if (h0 < 0) return std::nullopt;

    // Tie-break on (f, g, canonical state) for full determinism.
    struct Node {
      int f;
      int g;
      std::string canon;
      WorldState state;
    };
    auto cmp = [](const Node& a, const Node& b) {
      return std::tie(a.f, a.g, a.canon) > std::tie(b.f, b.g, b.canon);
    };
    std::priority_queue<Node, std::vector<Node>, decltype(cmp)> open(cmp);
    std::unordered_map<std::string, int> best_g;
    best_g[canon0] = 0;
    open.push(Node{h0, 0, canon0, start});

    int expansions = 0;
    while (!open.empty()) {
      Node cur = open.top();
      open.pop();
      if (auto it = best_g.find(cur.canon); it != best_g.end() && cur.g > it->second) continue;
      if (cur.state.gem_collected(goal_gem)) return cur.g;
      if (budget >= 0 && expansions >= budget) {
        // LRTA*-style bounded estimate: min f over the remaining frontier.
        int bound = cur.f;
        auto key = CacheKey{std::move(canon0), goal_gem};
        auto [it, inserted] = learned_.try_emplace(key, bound);
        if (!inserted && bound > it->second) it->second = bound;
        return bound;
      }
      ++expansions;
      for (const Action& a : legal_actions(cur.state, map_)) {
        WorldState next = transition(cur.state, a, map_);
        int g = cur.g + 1;
        std::string canon = next.canonical();
        auto it = best_g.find(canon);
        if (it != best_g.end() && it->second <= g) continue;
        best_g[canon] = g;
        int h = heuristic(canon, next, goal_gem);
        if (h < 0) continue;
        open.push(Node{g + h, g, std::move(canon), std::move(next)});
      }
    }
    return std::nullopt;
  }

  const GridMap& map_;
  PlannerConfig cfg_;
  RelaxedDistances relaxed_;
  std::unordered_map<CacheKey, std::optional<int>, CacheKeyHash> cache_;
  std::unordered_map<CacheKey, int, CacheKeyHash> learned_;
};

}  // namespace btom
