#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "btom/error.hpp"

namespace btom {

enum class Direction : uint8_t { Up = 0, Down = 1, Left = 2, Right = 3 };

inline std::string direction_name(Direction d) {
  switch (d) {
    case Direction::Up: return "up";
    case Direction::Down: return "down";
    case Direction::Left: return "left";
    case Direction::Right: return "right";
  }
  return "?";
}

struct Cell {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

inline Cell step_cell(Cell c, Direction d) {
  switch (d) {
    case Direction::Up: return {c.x, c.y - 1};
    case Direction::Down: return {c.x, c.y + 1};
    case Direction::Left: return {c.x - 1, c.y};
    case Direction::Right: return {c.x + 1, c.y};
  }
  return c;
}

inline bool cells_adjacent_or_equal(Cell a, Cell b) {
  int dx = std::abs(a.x - b.x), dy = std::abs(a.y - b.y);
  return dx + dy <= 1;
}

// Object catalogs. Indices into these vectors are the stable object handles
// used throughout planning and inference; ids are the string names from the
// scenario file.
struct DoorDef {
  std::string id;
  int color = -1;  // index into GridMap::colors
  Cell cell;
};

struct KeyDef {
  std::string id;
  int color = -1;
  // Floor keys have a cell. Keys without one are potential box contents only;
  // they enter play (if at all) through a box assignment.
  std::optional<Cell> cell;
};

struct BoxDef {
  std::string id;
  Cell cell;
};

struct GemDef {
  std::string id;
  std::string shape;
  Cell cell;
};

enum class ObjectKind : uint8_t { Key = 0, Gem = 1, Door = 2, Box = 3 };

// Static world description: geometry plus the object catalog. Dynamic facts
// (positions, contents, locks) live in WorldState.
struct GridMap {
  int width = 0;
  int height = 0;
  std::vector<uint8_t> wall;  // row-major, 1 = wall
  std::vector<std::string> colors;
  std::vector<DoorDef> doors;
  std::vector<KeyDef> keys;
  std::vector<BoxDef> boxes;
  std::vector<GemDef> gems;
  Cell agent_start;

  // (id, kind, index) over floor keys and gems, sorted by id; fixes the
  // pickup enumeration order in legal_actions.
  std::vector<std::tuple<std::string, ObjectKind, int>> pickup_order;
  std::vector<int> doors_by_id;  // door indices sorted by id
  std::vector<int> boxes_by_id;

  bool in_bounds(Cell c) const {
    return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height;
  }
  bool is_wall(Cell c) const { return wall[static_cast<size_t>(c.y) * width + c.x]; }

  int color_index(const std::string& name) const {
    for (size_t i = 0; i < colors.size(); ++i)
      if (colors[i] == name) return static_cast<int>(i);
    return -1;
  }
  int gem_index(const std::string& id) const {
    for (size_t i = 0; i < gems.size(); ++i)
      if (gems[i].id == id) return static_cast<int>(i);
    throw UnknownGem("unknown gem id: " + id);
  }
  int key_index(const std::string& id) const {
    for (size_t i = 0; i < keys.size(); ++i)
      if (keys[i].id == id) return static_cast<int>(i);
    return -1;
  }
  int box_index(const std::string& id) const {
    for (size_t i = 0; i < boxes.size(); ++i)
      if (boxes[i].id == id) return static_cast<int>(i);
    return -1;
  }
  int door_index(const std::string& id) const {
    for (size_t i = 0; i < doors.size(); ++i)
      if (doors[i].id == id) return static_cast<int>(i);
    return -1;
  }

  // Call once after the catalogs are filled.
  void finalize() {
    pickup_order.clear();
    for (size_t i = 0; i < keys.size(); ++i)
      if (keys[i].cell) pickup_order.emplace_back(keys[i].id, ObjectKind::Key, static_cast<int>(i));
    for (size_t i = 0; i < gems.size(); ++i)
      pickup_order.emplace_back(gems[i].id, ObjectKind::Gem, static_cast<int>(i));
    std::sort(pickup_order.begin(), pickup_order.end());
    doors_by_id.resize(doors.size());
    boxes_by_id.resize(boxes.size());
    for (size_t i = 0; i < doors.size(); ++i) doors_by_id[i] = static_cast<int>(i);
    for (size_t i = 0; i < boxes.size(); ++i) boxes_by_id[i] = static_cast<int>(i);
    std::sort(doors_by_id.begin(), doors_by_id.end(),
              [&](int a, int b) { return doors[a].id < doors[b].id; });
    std::sort(boxes_by_id.begin(), boxes_by_id.end(),
              [&](int a, int b) { return boxes[a].id < boxes[b].id; });
  }
};

struct Action {
  enum class Kind : uint8_t { Move = 0, Pickup = 1, Unlock = 2, Open = 3 };
  Kind kind = Kind::Move;
  Direction dir = Direction::Up;       // Move
  ObjectKind obj = ObjectKind::Key;    // Pickup: Key|Gem, Unlock: Door, Open: Box
  int index = -1;                      // catalog index of the target
  friend auto operator<=>(const Action&, const Action&) = default;

  static Action move(Direction d) { return {Kind::Move, d, ObjectKind::Key, -1}; }
  static Action pickup_key(int i) { return {Kind::Pickup, Direction::Up, ObjectKind::Key, i}; }
  static Action pickup_gem(int i) { return {Kind::Pickup, Direction::Up, ObjectKind::Gem, i}; }
  static Action unlock(int door) { return {Kind::Unlock, Direction::Up, ObjectKind::Door, door}; }
  static Action open(int box) { return {Kind::Open, Direction::Up, ObjectKind::Box, box}; }
};

inline std::string action_token(const Action& a, const GridMap& map) {
  switch (a.kind) {
    case Action::Kind::Move: return direction_name(a.dir);
    case Action::Kind::Pickup:
      return "pickup(" + (a.obj == ObjectKind::Key ? map.keys[a.index].id : map.gems[a.index].id) + ")";
    case Action::Kind::Unlock: return "unlock(" + map.doors[a.index].id + ")";
    case Action::Kind::Open: return "open(" + map.boxes[a.index].id + ")";
  }
  return "?";
}

// Full dynamic state. Values are immutable in use: transition() returns a new
// state. Field order defines the canonical comparison order.
struct WorldState {
  Cell agent;
  std::vector<uint8_t> inventory;      // count per color index
  uint32_t doors_unlocked = 0;         // bit per door index
  uint32_t boxes_opened = 0;           // bit per box index
  std::vector<int8_t> box_contents;    // key index or -1, per box
  uint64_t floor_keys = 0;             // bit per key index: still on the floor
  uint64_t floor_gems = 0;             // bit per gem index: still on the floor
  uint32_t collected = 0;              // bit per gem index

  friend auto operator<=>(const WorldState&, const WorldState&) = default;

  bool door_unlocked(int i) const { return doors_unlocked >> i & 1; }
  bool box_opened(int i) const { return boxes_opened >> i & 1; }
  bool key_on_floor(int i) const { return floor_keys >> i & 1; }
  bool gem_on_floor(int i) const { return floor_gems >> i & 1; }
  bool gem_collected(int i) const { return collected >> i & 1; }

  // Packed byte form; equal states produce identical bytes. Used as the
  // planner cache key and as the bitwise-comparable canonical form.
  std::string canonical() const {
    std::string s;
    s.reserve(24 + inventory.size() + box_contents.size());
    auto put32 = [&s](uint32_t v) {
      for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>(v >> (8 * i) & 0xff));
    };
    auto put64 = [&s](uint64_t v) {
      for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>(v >> (8 * i) & 0xff));
    };
    put32(static_cast<uint32_t>(agent.x));
    put32(static_cast<uint32_t>(agent.y));
    for (uint8_t c : inventory) s.push_back(static_cast<char>(c));
    put32(doors_unlocked);
    put32(boxes_opened);
    for (int8_t c : box_contents) s.push_back(static_cast<char>(c));
    put64(floor_keys);
    put64(floor_gems);
    put32(collected);
    return s;
  }
};

struct WorldStateHash {
  size_t operator()(const WorldState& s) const {
    return std::hash<std::string>()(s.canonical());
  }
};

// Initial state for a given box-content assignment (key index or -1 per box).
inline WorldState make_initial_state(const GridMap& map, const std::vector<int8_t>& contents) {
  WorldState s;
  s.agent = map.agent_start;
  s.inventory.assign(map.colors.size(), 0);
  s.box_contents = contents;
  for (size_t i = 0; i < map.keys.size(); ++i)
    if (map.keys[i].cell) s.floor_keys |= uint64_t{1} << i;
  for (size_t i = 0; i < map.gems.size(); ++i) s.floor_gems |= uint64_t{1} << i;
  return s;
}

inline bool is_walkable(const GridMap& map, const WorldState& s, Cell c) {
  if (!map.in_bounds(c) || map.is_wall(c)) return false;
  for (size_t i = 0; i < map.boxes.size(); ++i)
    if (map.boxes[i].cell == c) return false;  // boxes are solid
  for (size_t i = 0; i < map.doors.size(); ++i)
    if (map.doors[i].cell == c && !s.door_unlocked(static_cast<int>(i))) return false;
  return true;
}

inline bool action_legal(const WorldState& s, const Action& a, const GridMap& map) {
  switch (a.kind) {
    case Action::Kind::Move:
      return is_walkable(map, s, step_cell(s.agent, a.dir));
    case Action::Kind::Pickup: {
      if (a.obj == ObjectKind::Key) {
        if (a.index < 0 || a.index >= static_cast<int>(map.keys.size())) return false;
        const auto& k = map.keys[a.index];
        return k.cell && s.key_on_floor(a.index) && cells_adjacent_or_equal(s.agent, *k.cell);
      }
      if (a.index < 0 || a.index >= static_cast<int>(map.gems.size())) return false;
      return s.gem_on_floor(a.index) && cells_adjacent_or_equal(s.agent, map.gems[a.index].cell);
    }
    case Action::Kind::Unlock: {
      if (a.index < 0 || a.index >= static_cast<int>(map.doors.size())) return false;
      const auto& d = map.doors[a.index];
      return !s.door_unlocked(a.index) && cells_adjacent_or_equal(s.agent, d.cell) &&
             s.inventory[d.color] > 0;
    }
    case Action::Kind::Open: {
      if (a.index < 0 || a.index >= static_cast<int>(map.boxes.size())) return false;
      return !s.box_opened(a.index) && cells_adjacent_or_equal(s.agent, map.boxes[a.index].cell);
    }
  }
  return false;
}

// Every action whose precondition holds, in a fixed order: moves u/d/l/r,
// then pickups, unlocks and opens each by ascending object id.
inline std::vector<Action> legal_actions(const WorldState& s, const GridMap& map) {
  std::vector<Action> out;
  for (Direction d : {Direction::Up, Direction::Down, Direction::Left, Direction::Right}) {
    Action a = Action::move(d);
    if (action_legal(s, a, map)) out.push_back(a);
  }
  for (const auto& [id, kind, idx] : map.pickup_order) {
    Action a = kind == ObjectKind::Key ? Action::pickup_key(idx) : Action::pickup_gem(idx);
    if (action_legal(s, a, map)) out.push_back(a);
  }
  for (int d : map.doors_by_id) {
    Action a = Action::unlock(d);
    if (action_legal(s, a, map)) out.push_back(a);
  }
  for (int b : map.boxes_by_id) {
    Action a = Action::open(b);
    if (action_legal(s, a, map)) out.push_back(a);
  }
  return out;
}

inline WorldState transition(const WorldState& s, const Action& a, const GridMap& map) {
  if (!action_legal(s, a, map))
    throw IllegalAction("illegal action: " + action_token(a, map));
  WorldState n = s;
  switch (a.kind) {
    case Action::Kind::Move:
      n.agent = step_cell(s.agent, a.dir);
      break;
    case Action::Kind::Pickup:
      if (a.obj == ObjectKind::Key) {
        n.floor_keys &= ~(uint64_t{1} << a.index);
        n.inventory[map.keys[a.index].color]++;
      } else {
        n.floor_gems &= ~(uint64_t{1} << a.index);
        n.collected |= uint32_t{1} << a.index;
      }
      break;
    case Action::Kind::Unlock:
      n.doors_unlocked |= uint32_t{1} << a.index;
      n.inventory[map.doors[a.index].color]--;  // each key is used once
      break;
    case Action::Kind::Open: {
      n.boxes_opened |= uint32_t{1} << a.index;
      int8_t key = s.box_contents[a.index];
      if (key >= 0) {
        n.inventory[map.keys[key].color]++;
        n.box_contents[a.index] = -1;
      }
      break;
    }
  }
  return n;
}

inline bool goal_achieved(const WorldState& s, int gem_index, const GridMap& map) {
  if (gem_index < 0 || gem_index >= static_cast<int>(map.gems.size()))
    throw UnknownGem("gem index out of range: " + std::to_string(gem_index));
  return s.gem_collected(gem_index);
}

inline bool goal_achieved(const WorldState& s, const std::string& gem_id, const GridMap& map) {
  return goal_achieved(s, map.gem_index(gem_id), map);
}

}  // namespace btom
