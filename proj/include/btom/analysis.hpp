#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "btom/error.hpp"
#include "btom/outputs.hpp"
#include "btom/util.hpp"

namespace btom {

// One participant's raw rating of one item. Goal rows are 0/1 checkbox
// indicators; statement rows are 1..7 Likert values.
struct RatingRow {
  std::string scenario_id;
  int judgment_step = 0;
  std::string kind;
  std::string target_id;
  std::string participant_id;
  double rating = 0.0;
};

inline const char* kHumanHeader = "scenario_id,judgment_step,kind,target_id,participant_id,rating";

inline std::vector<RatingRow> parse_human_csv(std::istream& in, const std::string& origin) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kHumanHeader)
    throw SchemaError(origin + ": expected header '" + std::string(kHumanHeader) + "'");
  std::vector<RatingRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto f = split_on(line, ',');
    if (f.size() != 6)
      throw SchemaError(origin + ": line " + std::to_string(lineno) + ": expected 6 fields");
    RatingRow r;
    r.scenario_id = f[0];
    r.kind = f[2];
    r.target_id = f[3];
    r.participant_id = f[4];
    try {
      r.judgment_step = std::stoi(f[1]);
      r.rating = std::stod(f[5]);
    } catch (const std::exception&) {
      throw SchemaError(origin + ": line " + std::to_string(lineno) + ": bad numeric field");
    }
    if (r.kind == "statement") {
      if (r.rating < 1 || r.rating > 7 || r.rating != std::floor(r.rating))
        throw ValidationError(origin + ": line " + std::to_string(lineno) +
                              ": statement ratings must be integers in 1..7");
    } else if (r.kind == "goal") {
      if (r.rating != 0.0 && r.rating != 1.0)
        throw ValidationError(origin + ": line " + std::to_string(lineno) +
                              ": goal ratings must be 0 or 1");
    } else {
      throw SchemaError(origin + ": line " + std::to_string(lineno) + ": bad kind '" + r.kind + "'");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<RatingRow> read_human_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open human ratings file: " + path);
  return parse_human_csv(f, path);
}

struct CellKey {
  std::string scenario_id;
  int judgment_step = 0;
  std::string kind;
  std::string target_id;
  friend auto operator<=>(const CellKey&, const CellKey&) = default;
};

// Likert 1..7 maps to (r-1)/6 (so the "equally likely" midpoint 4 lands on
// 0.5); goal indicators average to a selection proportion. Mean across
// participants per cell.
inline std::map<CellKey, double> normalize_ratings(const std::vector<RatingRow>& rows) {
  std::map<CellKey, std::pair<double, int>> acc;
  for (const auto& r : rows) {
    double v = r.kind == "statement" ? (r.rating - 1.0) / 6.0 : r.rating;
    auto& [sum, count] = acc[CellKey{r.scenario_id, r.judgment_step, r.kind, r.target_id}];
    sum += v;
    count += 1;
  }
  std::map<CellKey, double> out;
  for (const auto& [k, sc] : acc) out[k] = sc.first / sc.second;
  return out;
}

inline double rating_for_cell(const std::map<CellKey, double>& cells, const CellKey& key) {
  auto it = cells.find(key);
  if (it == cells.end())
    throw EmptyCell("no ratings for cell " + key.scenario_id + "/" +
                    std::to_string(key.judgment_step) + "/" + key.kind + "/" + key.target_id);
  return it->second;
}

// Pearson r, two-pass centered form, clamped to [-1, 1]. Bitwise-identical
// series short-circuit to exactly 1 (the mathematical value).
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InsufficientPairs("series lengths differ");
  const size_t n = x.size();
  if (n < 2) throw InsufficientPairs("need at least 2 pairs, got " + std::to_string(n));
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / static_cast<double>(n), my = sy / static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw ZeroVariance("a series has zero variance");
  bool identical = true;
  for (size_t i = 0; i < n && identical; ++i) identical = x[i] == y[i];
  if (identical) return 1.0;
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

struct CorrelationReport {
  std::string model;
  std::string prior;
  std::string kind;
  double r = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  int n_pairs = 0;
  int n_boot = 0;
};

// Percentile bootstrap over item cells. Degenerate (zero-variance) resamples
// are dropped. The interval is widened to include the point estimate so that
// lo <= r <= hi always holds.
inline std::pair<double, double> bootstrap_ci(std::span<const double> x, std::span<const double> y,
                                              double r, int n_boot, uint64_t seed) {
  const size_t n = x.size();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, n - 1);
  std::vector<double> stats;
  stats.reserve(n_boot);
  std::vector<double> bx(n), by(n);
  for (int b = 0; b < n_boot; ++b) {
    for (size_t i = 0; i < n; ++i) {
      size_t j = pick(rng);
      bx[i] = x[j];
      by[i] = y[j];
    }
    try {
      stats.push_back(pearson(bx, by));
    } catch (const ZeroVariance&) {
      // resample collapsed onto one point; draw contributes nothing
    }
  }
  if (stats.empty()) return {r, r};
  std::sort(stats.begin(), stats.end());
  auto percentile = [&](double p) {
    double idx = p * static_cast<double>(stats.size() - 1);
    size_t lo = static_cast<size_t>(std::floor(idx));
    size_t hi = static_cast<size_t>(std::ceil(idx));
    double frac = idx - static_cast<double>(lo);
    return stats[lo] * (1.0 - frac) + stats[hi] * frac;
  };
  double lo = percentile(0.025), hi = percentile(0.975);
  return {std::min(lo, r), std::max(hi, r)};
}

// Pearson r with a bootstrap 95% CI over aligned (scenario, step, target)
// cells. Requires at least 3 aligned pairs.
inline CorrelationReport correlate(std::span<const double> model_vals,
                                   std::span<const double> human_vals, int n_boot, uint64_t seed) {
  if (model_vals.size() != human_vals.size())
    throw InsufficientPairs("model and human series lengths differ");
  if (model_vals.size() < 3)
    throw InsufficientPairs("need at least 3 aligned pairs, got " +
                            std::to_string(model_vals.size()));
  CorrelationReport rep;
  rep.n_pairs = static_cast<int>(model_vals.size());
  rep.n_boot = n_boot;
  rep.r = pearson(model_vals, human_vals);
  auto [lo, hi] = bootstrap_ci(model_vals, human_vals, rep.r, n_boot, seed);
  rep.ci_lo = std::clamp(lo, -1.0, 1.0);
  rep.ci_hi = std::clamp(hi, -1.0, 1.0);
  return rep;
}

// Align model rows with normalized human cells (inner join on the cell key,
// in sorted key order) and correlate.
inline CorrelationReport correlate_rows(const std::vector<OutputRow>& model_rows,
                                        const std::map<CellKey, double>& human_cells,
                                        const std::string& kind, int n_boot, uint64_t seed) {
  std::map<CellKey, double> model_cells;
  std::string model = "-", prior = "-";
  for (const auto& r : model_rows) {
    if (r.kind != kind) continue;
    model_cells[CellKey{r.scenario_id, r.judgment_step, r.kind, r.target_id}] = r.probability;
    model = r.model;
    prior = r.prior;
  }
  std::vector<double> mv, hv;
  for (const auto& [key, value] : model_cells) {
    auto it = human_cells.find(key);
    if (it == human_cells.end()) continue;
    mv.push_back(value);
    hv.push_back(it->second);
  }
  CorrelationReport rep = correlate(mv, hv, n_boot, seed);
  rep.model = model;
  rep.prior = prior;
  rep.kind = kind;
  return rep;
}

inline std::string render_report_table(const std::vector<CorrelationReport>& reports) {
  std::string out = "model       prior       kind       r        95% CI               n\n";
  for (const auto& rep : reports) {
    auto pad = [](std::string s, size_t w) {
      if (s.size() < w) s += std::string(w - s.size(), ' ');
      return s;
    };
    out += pad(rep.model, 12) + pad(rep.prior, 12) + pad(rep.kind, 11) +
           pad(format_double(rep.r), 9) +
           pad("[" + format_double(rep.ci_lo) + ", " + format_double(rep.ci_hi) + "]", 21) +
           std::to_string(rep.n_pairs) + "\n";
  }
  return out;
}

}  // namespace btom
