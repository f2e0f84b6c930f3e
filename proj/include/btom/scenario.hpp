#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "btom/logic.hpp"
#include "btom/util.hpp"
#include "btom/world.hpp"

namespace btom {

constexpr int kFormatVersion = 1;

// One alternative for a box's initial contents: a key index, or -1 for empty.
// Weights are relative within the box and normalized at expansion time.
struct BoxOption {
  int key = -1;
  double weight = 1.0;
};

struct StatementDef {
  std::string id;
  std::string text;  // s-expression as written in the file
  EpistemicStatement parsed;
  std::string gloss;  // optional English annotation
};

struct Scenario {
  int format_version = kFormatVersion;
  std::string id;
  std::string note;
  GridMap map;
  ModelSignature sig;
  std::vector<int> goal_gems;                       // gem indices, file order
  std::vector<double> goal_prior;                   // normalized, aligned with goal_gems
  std::vector<std::vector<BoxOption>> box_options;  // per box, file order
  std::optional<std::vector<int8_t>> truth;         // per box: key index or -1
  std::vector<Action> trajectory;
  std::vector<int> judgment_points;
  std::vector<StatementDef> statements;

  WorldState truth_initial_state() const {
    if (!truth) throw MissingGroundTruth("scenario " + id + " declares no ground-truth contents");
    return make_initial_state(map, *truth);
  }
};

// Goals, initial states and priors the filter enumerates over.
struct HypothesisSpace {
  std::vector<int> goals;  // gem indices
  std::vector<double> goal_prior;
  std::vector<WorldState> initial_states;
  std::vector<double> state_prior;
  double beta = 2.5;
};

namespace detail {

struct Line {
  int number;
  std::string text;
};

[[noreturn]] inline void fail_parse(int line, const std::string& msg) {
  throw ParseError("line " + std::to_string(line) + ": " + msg);
}
[[noreturn]] inline void fail_valid(const std::string& msg) { throw ValidationError(msg); }

inline Action parse_action_token(const std::string& tok, const GridMap& map, int line) {
  if (tok == "up") return Action::move(Direction::Up);
  if (tok == "down") return Action::move(Direction::Down);
  if (tok == "left") return Action::move(Direction::Left);
  if (tok == "right") return Action::move(Direction::Right);
  auto paren = tok.find('(');
  if (paren == std::string::npos || tok.back() != ')')
    fail_parse(line, "bad trajectory token '" + tok + "'");
  std::string verb = tok.substr(0, paren);
  std::string id = tok.substr(paren + 1, tok.size() - paren - 2);
  if (verb == "pickup") {
    int k = map.key_index(id);
    if (k >= 0) {
      if (!map.keys[k].cell) fail_parse(line, "pickup of key '" + id + "' which never lies on the floor");
      return Action::pickup_key(k);
    }
    for (size_t i = 0; i < map.gems.size(); ++i)
      if (map.gems[i].id == id) return Action::pickup_gem(static_cast<int>(i));
    fail_parse(line, "pickup of unknown object '" + id + "'");
  }
  if (verb == "unlock") {
    int d = map.door_index(id);
    if (d < 0) fail_parse(line, "unlock of unknown door '" + id + "'");
    return Action::unlock(d);
  }
  if (verb == "open") {
    int b = map.box_index(id);
    if (b < 0) fail_parse(line, "open of unknown box '" + id + "'");
    return Action::open(b);
  }
  fail_parse(line, "bad trajectory token '" + tok + "'");
}

}  // namespace detail

inline std::string action_to_token(const Action& a, const GridMap& map) { return action_token(a, map); }

// Parses and fully validates a scenario document. Errors carry line context
// (ParseError) or name the violated invariant (ValidationError).
inline Scenario parse_scenario(std::istream& in, const std::string& origin = "<stream>") {
  using detail::fail_parse;
  using detail::fail_valid;

  Scenario sc;
  GridMap& map = sc.map;

  std::vector<std::string> grid_rows;
  int grid_line = -1;
  // declared glyph -> (kind, catalog index)
  std::map<char, std::pair<ObjectKind, int>> glyphs;
  std::vector<std::string> goal_ids;
  std::vector<double> goal_prior_raw;
  bool goal_prior_uniform = true;
  std::vector<std::pair<std::string, std::vector<std::string>>> contents_lines;  // box id -> option tokens
  std::vector<std::pair<std::string, std::string>> truth_lines;                  // box id -> token
  std::vector<std::string> trajectory_tokens;
  std::vector<std::pair<int, std::string>> statement_lines;  // line, "id: sexpr"
  std::vector<std::pair<std::string, std::string>> gloss_lines;
  bool saw_version = false;

  auto declare_color = [&](const std::string& name) {
    int c = map.color_index(name);
    if (c >= 0) return c;
    map.colors.push_back(name);
    return static_cast<int>(map.colors.size() - 1);
  };
  auto declare_glyph = [&](char g, ObjectKind kind, int index, int line) {
    if (g == '#' || g == '.' || g == '@') fail_parse(line, "glyph cannot be '#', '.' or '@'");
    if (glyphs.count(g)) fail_valid("glyph '" + std::string(1, g) + "' declared twice");
    glyphs[g] = {kind, index};
  };

  std::string raw;
  int lineno = 0;
  bool in_grid = false;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (in_grid) {
      if (trim(raw) == "end") {
        in_grid = false;
        continue;
      }
      grid_rows.push_back(raw);
      continue;
    }
    std::string_view line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto colon = line.find(':');
    if (colon == std::string_view::npos) fail_parse(lineno, "expected 'directive: value'");
    std::string head(trim(line.substr(0, colon)));
    std::string value(trim(line.substr(colon + 1)));
    auto head_parts = split_ws(head);
    const std::string& directive = head_parts[0];

    if (directive == "format_version") {
      saw_version = true;
      if (value != std::to_string(kFormatVersion))
        fail_parse(lineno, "unsupported format_version '" + value + "'");
    } else if (directive == "id") {
      sc.id = value;
    } else if (directive == "note") {
      sc.note = value;
    } else if (directive == "grid") {
      in_grid = true;
      grid_line = lineno;
    } else if (directive == "door" || directive == "box" || directive == "gem" ||
               directive == "key") {
      auto parts = split_ws(value);
      if (directive == "door") {
        if (head_parts.size() != 2 || head_parts[1].size() != 1 || parts.size() != 2)
          fail_parse(lineno, "expected 'door <glyph>: <id> <color>'");
        map.doors.push_back({parts[0], declare_color(parts[1]), {}});
        declare_glyph(head_parts[1][0], ObjectKind::Door, static_cast<int>(map.doors.size() - 1), lineno);
      } else if (directive == "box") {
        if (head_parts.size() != 2 || head_parts[1].size() != 1 || parts.size() != 1)
          fail_parse(lineno, "expected 'box <glyph>: <id>'");
        map.boxes.push_back({parts[0], {}});
        declare_glyph(head_parts[1][0], ObjectKind::Box, static_cast<int>(map.boxes.size() - 1), lineno);
      } else if (directive == "gem") {
        if (head_parts.size() != 2 || head_parts[1].size() != 1 || parts.size() != 2)
          fail_parse(lineno, "expected 'gem <glyph>: <id> <shape>'");
        map.gems.push_back({parts[0], parts[1], {}});
        declare_glyph(head_parts[1][0], ObjectKind::Gem, static_cast<int>(map.gems.size() - 1), lineno);
      } else {  // key, with or without glyph
        if (parts.size() != 2) fail_parse(lineno, "expected 'key [<glyph>]: <id> <color>'");
        map.keys.push_back({parts[0], declare_color(parts[1]), std::nullopt});
        if (head_parts.size() == 2) {
          if (head_parts[1].size() != 1) fail_parse(lineno, "key glyph must be one character");
          declare_glyph(head_parts[1][0], ObjectKind::Key, static_cast<int>(map.keys.size() - 1), lineno);
        } else if (head_parts.size() != 1) {
          fail_parse(lineno, "expected 'key [<glyph>]: <id> <color>'");
        }
      }
    } else if (directive == "goals") {
      goal_ids = split_ws(value);
    } else if (directive == "goal_prior") {
      if (value != "uniform") {
        goal_prior_uniform = false;
        for (const auto& t : split_ws(value)) {
          try {
            goal_prior_raw.push_back(std::stod(t));
          } catch (const std::exception&) {
            fail_parse(lineno, "bad goal prior value '" + t + "'");
          }
        }
      }
    } else if (directive == "state_prior") {
      if (value != "uniform")
        fail_parse(lineno, "state_prior supports only 'uniform'; use @weights on contents options");
    } else if (directive == "contents") {
      if (head_parts.size() != 2) fail_parse(lineno, "expected 'contents <box id>: ...'");
      std::vector<std::string> opts;
      for (auto& o : split_on(value, '|')) {
        std::string t(trim(o));
        if (t.empty()) fail_parse(lineno, "empty contents option");
        opts.push_back(t);
      }
      contents_lines.emplace_back(head_parts[1], std::move(opts));
    } else if (directive == "truth") {
      if (head_parts.size() != 2) fail_parse(lineno, "expected 'truth <box id>: ...'");
      truth_lines.emplace_back(head_parts[1], value);
    } else if (directive == "trajectory") {
      for (auto& t : split_ws(value)) trajectory_tokens.push_back(t);
    } else if (directive == "judgments") {
      for (const auto& t : split_ws(value)) {
        try {
          sc.judgment_points.push_back(std::stoi(t));
        } catch (const std::exception&) {
          fail_parse(lineno, "bad judgment point '" + t + "'");
        }
      }
    } else if (directive == "statement") {
      if (head_parts.size() != 2) fail_parse(lineno, "expected 'statement <id>: <formula>'");
      statement_lines.emplace_back(lineno, head_parts[1] + "\x1f" + value);
    } else if (directive == "gloss") {
      if (head_parts.size() != 2) fail_parse(lineno, "expected 'gloss <id>: <text>'");
      gloss_lines.emplace_back(head_parts[1], value);
    } else {
      fail_parse(lineno, "unknown directive '" + directive + "'");
    }
  }
  if (in_grid) fail_parse(grid_line, "grid block not closed with 'end'");
  if (!saw_version) fail_valid("missing format_version");
  if (sc.id.empty()) fail_valid("missing scenario id");
  if (grid_rows.empty()) fail_valid("missing grid");

  // --- grid geometry ---
  map.height = static_cast<int>(grid_rows.size());
  map.width = static_cast<int>(grid_rows[0].size());
  for (size_t y = 0; y < grid_rows.size(); ++y)
    if (static_cast<int>(grid_rows[y].size()) != map.width)
      fail_parse(grid_line + 1 + static_cast<int>(y), "grid rows must all have the same width");
  map.wall.assign(static_cast<size_t>(map.width) * map.height, 0);
  bool saw_agent = false;
  std::map<char, int> glyph_seen;
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      char g = grid_rows[y][x];
      Cell c{x, y};
      if (g == '#') {
        map.wall[static_cast<size_t>(y) * map.width + x] = 1;
      } else if (g == '.') {
        // floor
      } else if (g == '@') {
        if (saw_agent) fail_valid("more than one agent start '@' in grid");
        saw_agent = true;
        map.agent_start = c;
      } else {
        auto it = glyphs.find(g);
        if (it == glyphs.end())
          fail_valid("grid glyph '" + std::string(1, g) + "' is not declared");
        if (++glyph_seen[g] > 1)
          fail_valid("glyph '" + std::string(1, g) + "' appears more than once in grid");
        auto [kind, index] = it->second;
        switch (kind) {
          case ObjectKind::Door: map.doors[index].cell = c; break;
          case ObjectKind::Box: map.boxes[index].cell = c; break;
          case ObjectKind::Gem: map.gems[index].cell = c; break;
          case ObjectKind::Key: map.keys[index].cell = c; break;
        }
      }
    }
  }
  if (!saw_agent) fail_valid("grid has no agent start '@'");
  for (const auto& [g, ki] : glyphs)
    if (!glyph_seen.count(g))
      fail_valid("declared glyph '" + std::string(1, g) + "' does not appear in the grid");
  map.finalize();

  // --- gems ---
  if (map.gems.empty() || map.gems.size() > 4)
    fail_valid("scenario must declare between 1 and 4 gems, got " + std::to_string(map.gems.size()));

  // --- goals & goal prior ---
  if (goal_ids.empty()) {
    for (size_t i = 0; i < map.gems.size(); ++i) sc.goal_gems.push_back(static_cast<int>(i));
  } else {
    for (const auto& gid : goal_ids) {
      int g = -1;
      for (size_t i = 0; i < map.gems.size(); ++i)
        if (map.gems[i].id == gid) g = static_cast<int>(i);
      if (g < 0) fail_valid("goals references unknown gem '" + gid + "'");
      sc.goal_gems.push_back(g);
    }
  }
  if (goal_prior_uniform) {
    sc.goal_prior.assign(sc.goal_gems.size(), 1.0 / static_cast<double>(sc.goal_gems.size()));
  } else {
    if (goal_prior_raw.size() != sc.goal_gems.size())
      fail_valid("goal_prior must list one value per goal");
    double sum = 0;
    for (double p : goal_prior_raw) {
      if (p < 0) fail_valid("goal_prior values must be non-negative");
      sum += p;
    }
    if (sum <= 0) fail_valid("goal_prior must have positive total mass");
    for (double p : goal_prior_raw) sc.goal_prior.push_back(p / sum);
  }

  // --- box contents options ---
  sc.box_options.assign(map.boxes.size(), {});
  std::vector<int> key_claimed_by(map.keys.size(), -1);
  for (const auto& [box_id, opts] : contents_lines) {
    int b = map.box_index(box_id);
    if (b < 0) fail_valid("contents references unknown box '" + box_id + "'");
    if (!sc.box_options[b].empty()) fail_valid("duplicate contents line for box '" + box_id + "'");
    for (const auto& tok : opts) {
      BoxOption opt;
      std::string name = tok;
      if (auto at = tok.find('@'); at != std::string::npos) {
        name = std::string(trim(tok.substr(0, at)));
        try {
          opt.weight = std::stod(tok.substr(at + 1));
        } catch (const std::exception&) {
          fail_valid("bad option weight in '" + tok + "'");
        }
        if (opt.weight < 0) fail_valid("option weights must be non-negative");
      }
      if (name == "empty") {
        opt.key = -1;
      } else {
        int k = map.key_index(name);
        if (k < 0) fail_valid("contents option references unknown key '" + name + "'");
        if (map.keys[k].cell) fail_valid("floor key '" + name + "' cannot be a box option");
        if (key_claimed_by[k] >= 0 && key_claimed_by[k] != b)
          fail_valid("key '" + name + "' appears in options of more than one box");
        key_claimed_by[k] = b;
        opt.key = k;
      }
      for (const auto& prev : sc.box_options[b])
        if (prev.key == opt.key) fail_valid("duplicate contents option for box '" + box_id + "'");
      sc.box_options[b].push_back(opt);
    }
  }
  for (size_t b = 0; b < map.boxes.size(); ++b) {
    if (sc.box_options[b].empty())
      fail_valid("box '" + map.boxes[b].id + "' has no contents line");
    double wsum = 0;
    for (const auto& o : sc.box_options[b]) wsum += o.weight;
    if (wsum <= 0) fail_valid("box '" + map.boxes[b].id + "' options have zero total weight");
  }

  // --- ground truth ---
  if (!truth_lines.empty()) {
    std::vector<int8_t> truth(map.boxes.size(), -1);
    std::vector<bool> covered(map.boxes.size(), false);
    for (const auto& [box_id, tok] : truth_lines) {
      int b = map.box_index(box_id);
      if (b < 0) fail_valid("truth references unknown box '" + box_id + "'");
      if (covered[b]) fail_valid("duplicate truth line for box '" + box_id + "'");
      covered[b] = true;
      if (tok == "empty") {
        truth[b] = -1;
      } else {
        int k = map.key_index(tok);
        if (k < 0) fail_valid("truth references unknown key '" + tok + "'");
        truth[b] = static_cast<int8_t>(k);
      }
    }
    for (size_t b = 0; b < map.boxes.size(); ++b)
      if (!covered[b]) fail_valid("truth must cover every box; missing '" + map.boxes[b].id + "'");
    // truth must be one of the declared combinations
    for (size_t b = 0; b < map.boxes.size(); ++b) {
      bool found = false;
      for (const auto& o : sc.box_options[b]) found = found || o.key == truth[b];
      if (!found)
        fail_valid("ground truth for box '" + map.boxes[b].id +
                   "' is not among its contents options");
    }
    sc.truth = std::move(truth);
  }

  // --- signature & statements ---
  sc.sig = ModelSignature::from_map(map);
  for (const auto& [line, packed] : statement_lines) {
    auto sep = packed.find('\x1f');
    StatementDef st;
    st.id = packed.substr(0, sep);
    st.text = packed.substr(sep + 1);
    for (const auto& prev : sc.statements)
      if (prev.id == st.id) fail_valid("duplicate statement id '" + st.id + "'");
    try {
      st.parsed = parse_formula(st.text, sc.sig).as_statement();
    } catch (const Error& e) {
      fail_valid("statement '" + st.id + "' (line " + std::to_string(line) +
                 ") does not parse: " + e.what());
    }
    sc.statements.push_back(std::move(st));
  }
  for (const auto& [sid, gloss] : gloss_lines) {
    bool found = false;
    for (auto& st : sc.statements)
      if (st.id == sid) {
        st.gloss = gloss;
        found = true;
      }
    if (!found) fail_valid("gloss for unknown statement '" + sid + "'");
  }

  // --- trajectory ---
  for (const auto& tok : trajectory_tokens)
    sc.trajectory.push_back(detail::parse_action_token(tok, map, 0));

  // Legality: from the ground-truth state when declared, otherwise from at
  // least one hypothesis state.
  auto simulate = [&](WorldState s) -> std::optional<int> {
    for (size_t t = 0; t < sc.trajectory.size(); ++t) {
      if (!action_legal(s, sc.trajectory[t], map)) return static_cast<int>(t);
      s = transition(s, sc.trajectory[t], map);
    }
    return std::nullopt;
  };
  if (sc.truth) {
    if (auto bad = simulate(make_initial_state(map, *sc.truth)))
      fail_valid("trajectory illegal at step " + std::to_string(*bad) +
                 " from the ground-truth initial state");
  } else {
    // enumerate option combinations odometer-style
    std::vector<size_t> pick(map.boxes.size(), 0);
    bool any_legal = map.boxes.empty() && !simulate(make_initial_state(map, {}));
    if (!map.boxes.empty()) {
      while (true) {
        std::vector<int8_t> contents;
        for (size_t b = 0; b < pick.size(); ++b)
          contents.push_back(static_cast<int8_t>(sc.box_options[b][pick[b]].key));
        if (!simulate(make_initial_state(map, contents))) {
          any_legal = true;
          break;
        }
        size_t b = pick.size();
        while (b-- > 0) {
          if (++pick[b] < sc.box_options[b].size()) break;
          pick[b] = 0;
          if (b == 0) goto done;
        }
      }
    done:;
    }
    if (!any_legal) fail_valid("trajectory is illegal in every hypothesis state");
  }

  // --- judgment points ---
  int last = -1;
  for (int j : sc.judgment_points) {
    if (j < 0 || j > static_cast<int>(sc.trajectory.size()))
      fail_valid("judgment point " + std::to_string(j) + " outside 0..trajectory length");
    if (j <= last) fail_valid("judgment points must be strictly increasing");
    last = j;
  }

  (void)origin;
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open scenario file: " + path);
  try {
    return parse_scenario(f, path);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Cartesian product of per-box options, goals in file order, states in
// lexicographic option order (last box varies fastest). Ordering is stable so
// filter runs reproduce bit-for-bit.
inline HypothesisSpace expand_hypothesis_space(const Scenario& sc, double beta = 2.5,
                                               size_t enumeration_cap = 1000000) {
  HypothesisSpace space;
  space.goals = sc.goal_gems;
  space.goal_prior = sc.goal_prior;
  space.beta = beta;

  size_t n_states = 1;
  for (const auto& opts : sc.box_options) {
    n_states *= opts.size();
    if (n_states > enumeration_cap)
      throw HypothesisSpaceTooLarge("initial-state count exceeds cap of " +
                                    std::to_string(enumeration_cap));
  }
  std::vector<double> box_norm;
  for (const auto& opts : sc.box_options) {
    double s = 0;
    for (const auto& o : opts) s += o.weight;
    box_norm.push_back(s);
  }
  std::vector<size_t> pick(sc.box_options.size(), 0);
  for (size_t n = 0; n < n_states; ++n) {
    std::vector<int8_t> contents;
    double prior = 1.0;
    for (size_t b = 0; b < pick.size(); ++b) {
      const BoxOption& o = sc.box_options[b][pick[b]];
      contents.push_back(static_cast<int8_t>(o.key));
      prior *= o.weight / box_norm[b];
    }
    space.initial_states.push_back(make_initial_state(sc.map, contents));
    space.state_prior.push_back(prior);
    size_t b = pick.size();
    while (b-- > 0) {
      if (++pick[b] < sc.box_options[b].size()) break;
      pick[b] = 0;
    }
  }
  return space;
}

}  // namespace btom
