#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "btom/scenario.hpp"
#include "btom/world.hpp"

namespace btom::test {

// Builds a GridMap straight from ASCII, bypassing the scenario loader so
// world/planner tests do not depend on it. Glyph bindings:
//   "door <glyph> <id> <color>", "key <glyph> <id> <color>",
//   "key - <id> <color>" (potential key), "box <glyph> <id>",
//   "gem <glyph> <id> <shape>"
inline GridMap make_map(const std::vector<std::string>& rows,
                        const std::vector<std::string>& bindings) {
  GridMap map;
  map.height = static_cast<int>(rows.size());
  map.width = static_cast<int>(rows[0].size());
  map.wall.assign(static_cast<size_t>(map.width) * map.height, 0);

  struct Pending {
    char glyph;
    ObjectKind kind;
    int index;
  };
  std::vector<Pending> pending;
  auto color_of = [&map](const std::string& name) {
    int c = map.color_index(name);
    if (c >= 0) return c;
    map.colors.push_back(name);
    return static_cast<int>(map.colors.size() - 1);
  };
  for (const auto& b : bindings) {
    std::istringstream ss(b);
    std::string kind, glyph, id, extra;
    ss >> kind >> glyph >> id >> extra;
    if (kind == "door") {
      map.doors.push_back({id, color_of(extra), {}});
      pending.push_back({glyph[0], ObjectKind::Door, static_cast<int>(map.doors.size() - 1)});
    } else if (kind == "key") {
      map.keys.push_back({id, color_of(extra), std::nullopt});
      if (glyph != "-")
        pending.push_back({glyph[0], ObjectKind::Key, static_cast<int>(map.keys.size() - 1)});
    } else if (kind == "box") {
      map.boxes.push_back({id, {}});
      pending.push_back({glyph[0], ObjectKind::Box, static_cast<int>(map.boxes.size() - 1)});
    } else {
      map.gems.push_back({id, extra, {}});
      pending.push_back({glyph[0], ObjectKind::Gem, static_cast<int>(map.gems.size() - 1)});
    }
  }
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      char g = rows[y][x];
      Cell c{x, y};
      if (g == '#') {
        map.wall[static_cast<size_t>(y) * map.width + x] = 1;
      } else if (g == '@') {
        map.agent_start = c;
      } else if (g != '.') {
        for (auto& p : pending) {
          if (p.glyph != g) continue;
          switch (p.kind) {
            case ObjectKind::Door: map.doors[p.index].cell = c; break;
            case ObjectKind::Key: map.keys[p.index].cell = c; break;
            case ObjectKind::Box: map.boxes[p.index].cell = c; break;
            case ObjectKind::Gem: map.gems[p.index].cell = c; break;
          }
        }
      }
    }
  }
  map.finalize();
  return map;
}

inline Scenario scenario_from_string(const std::string& text) {
  std::istringstream ss(text);
  return parse_scenario(ss, "<inline>");
}

}  // namespace btom::test
