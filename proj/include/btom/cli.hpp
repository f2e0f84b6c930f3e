#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "btom/analysis.hpp"
#include "btom/baselines.hpp"

namespace btom::cli {

namespace fs = std::filesystem;

inline constexpr uint64_t kDefaultSeed = 17;

inline uint64_t default_seed() {
  if (const char* env = std::getenv("BTOM_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError(std::string("bad BTOM_SEED value '") + env + "'");
    }
  }
  return kDefaultSeed;
}

inline std::vector<std::string> scenario_paths(const std::string& arg) {
  std::vector<std::string> paths;
  if (fs::is_directory(arg)) {
    for (const auto& e : fs::directory_iterator(arg))
      if (e.is_regular_file() && e.path().extension() == ".dkg") paths.push_back(e.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw IoError("no .dkg scenario files in directory: " + arg);
  } else {
    paths.push_back(arg);
  }
  return paths;
}

struct InferOptions {
  std::string scenario;
  std::string model = "btom";
  std::string prior = "statements";
  std::string eval_at = "initial";
  std::string planner = "exact";
  int rths_budget = 100;
  double beta = 2.5;
  std::string out;
  std::string format = "csv";
};

inline ModelRunConfig make_run_config(const InferOptions& opt) {
  ModelRunConfig cfg;
  cfg.kind = parse_model_kind(opt.model);
  cfg.prior = opt.prior == "states" ? BeliefPrior::UniformStates : BeliefPrior::UniformStatement;
  cfg.eval_at = opt.eval_at == "current" ? EvalAt::Current : EvalAt::Initial;
  cfg.beta = opt.beta;
  cfg.planner.mode =
      opt.planner == "rths" ? PlannerConfig::Mode::Rths : PlannerConfig::Mode::Exact;
  cfg.planner.rths_budget = opt.rths_budget;
  return cfg;
}

inline int cmd_infer(const InferOptions& opt) {
  ModelRunConfig cfg = make_run_config(opt);
  std::vector<JudgmentOutput> all;
  for (const auto& path : scenario_paths(opt.scenario)) {
    Scenario sc = load_scenario(path);
    try {
      auto outputs = run_model(sc, cfg);
      all.insert(all.end(), outputs.begin(), outputs.end());
    } catch (const Error& e) {
      throw Error("scenario " + sc.id + " (" + path + "): " + e.what());
    }
  }
  write_outputs(all, opt.out, opt.format == "json" ? OutputFormat::Json : OutputFormat::Csv);
  return 0;
}

struct SeriesOptions {
  std::string scenario;
  std::string model = "btom";
  std::string prior = "statements";
  std::string eval_at = "initial";
  std::string planner = "exact";
  int rths_budget = 100;
  double beta = 2.5;
  std::string out;
};

inline std::string render_series_csv(const Scenario& sc, const std::vector<SeriesPoint>& series) {
  std::string out = "scenario_id,step";
  for (int g : sc.goal_gems) out += ",goal_" + sc.map.gems[g].id;
  for (const auto& st : sc.statements) out += ",statement_" + st.id;
  out += "\n";
  for (const auto& p : series) {
    out += sc.id + "," + std::to_string(p.step);
    for (double v : p.goal_probs) out += "," + format_double(v);
    for (double v : p.statement_probs) out += "," + format_double(v);
    out += "\n";
  }
  return out;
}

inline int cmd_series(const SeriesOptions& opt) {
  InferOptions as_infer;
  as_infer.model = opt.model;
  as_infer.prior = opt.prior;
  as_infer.eval_at = opt.eval_at;
  as_infer.planner = opt.planner;
  as_infer.rths_budget = opt.rths_budget;
  as_infer.beta = opt.beta;
  ModelRunConfig cfg = make_run_config(as_infer);

  auto paths = scenario_paths(opt.scenario);
  bool dir_mode = fs::is_directory(opt.scenario);
  if (dir_mode) fs::create_directories(opt.out);
  for (const auto& path : paths) {
    Scenario sc = load_scenario(path);
    std::vector<SeriesPoint> series;
    try {
      series = run_model_series(sc, cfg);
    } catch (const Error& e) {
      throw Error("scenario " + sc.id + " (" + path + "): " + e.what());
    }
    std::string target = dir_mode ? (fs::path(opt.out) / (sc.id + ".csv")).string() : opt.out;
    std::ofstream f(target, std::ios::binary);
    if (!f) throw IoError("cannot open output file for writing: " + target);
    f << render_series_csv(sc, series);
  }
  return 0;
}

struct CorrelateOptions {
  std::string model_out;
  std::string human;
  std::string kind = "both";
  int n_boot = 10000;
  uint64_t seed = 0;
  bool seed_set = false;
};

inline int cmd_correlate(const CorrelateOptions& opt) {
  uint64_t seed = opt.seed_set ? opt.seed : default_seed();
  auto model_rows = read_output_csv(opt.model_out);
  auto human_cells = normalize_ratings(read_human_csv(opt.human));
  std::vector<std::string> kinds;
  if (opt.kind == "both") {
    kinds = {"goal", "statement"};
  } else if (opt.kind == "goal" || opt.kind == "statement") {
    kinds = {opt.kind};
  } else {
    throw ValidationError("bad --kind '" + opt.kind + "'");
  }
  std::vector<CorrelationReport> reports;
  for (const auto& k : kinds) {
    bool has_kind = false;
    for (const auto& r : model_rows) has_kind = has_kind || r.kind == k;
    if (!has_kind && opt.kind == "both") continue;  // e.g. goal rows absent for static models
    reports.push_back(correlate_rows(model_rows, human_cells, k, opt.n_boot, seed));
  }
  if (reports.empty()) throw InsufficientPairs("no rows of the requested kind in " + opt.model_out);
  std::cout << render_report_table(reports);
  return 0;
}

inline int run(std::vector<std::string> args) {
  CLI::App app{"Doors, Keys & Gems belief inference"};
  app.require_subcommand(1);

  InferOptions infer;
  auto* ci = app.add_subcommand("infer", "score goals and belief statements at judgment points");
  ci->add_option("--scenario", infer.scenario, "scenario file or directory of .dkg files")
      ->required();
  ci->add_option("--model", infer.model, "btom|heuristic|nonmental|omniscient|ignorant");
  ci->add_option("--prior", infer.prior, "belief prior: statements|states")
      ->check(CLI::IsMember({"statements", "states"}));
  ci->add_option("--beta", infer.beta, "rationality parameter (> 0)")
      ->check(CLI::PositiveNumber);
  ci->add_option("--eval-at", infer.eval_at, "evaluate statements at: initial|current")
      ->check(CLI::IsMember({"initial", "current"}));
  ci->add_option("--planner", infer.planner, "plan-cost mode: exact|rths")
      ->check(CLI::IsMember({"exact", "rths"}));
  ci->add_option("--rths-budget", infer.rths_budget, "node expansions per rths estimate")
      ->check(CLI::PositiveNumber);
  ci->add_option("--out", infer.out, "output file")->required();
  ci->add_option("--format", infer.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  SeriesOptions series;
  auto* cs = app.add_subcommand("series", "per-step probability series for plotting");
  cs->add_option("--scenario", series.scenario, "scenario file or directory")->required();
  cs->add_option("--model", series.model, "btom|heuristic");
  cs->add_option("--prior", series.prior, "statements|states")
      ->check(CLI::IsMember({"statements", "states"}));
  cs->add_option("--beta", series.beta, "rationality parameter (> 0)")->check(CLI::PositiveNumber);
  cs->add_option("--eval-at", series.eval_at, "initial|current")
      ->check(CLI::IsMember({"initial", "current"}));
  cs->add_option("--planner", series.planner, "exact|rths")
      ->check(CLI::IsMember({"exact", "rths"}));
  cs->add_option("--rths-budget", series.rths_budget, "node expansions per rths estimate");
  cs->add_option("--out", series.out, "output file (or directory when input is a directory)")
      ->required();

  CorrelateOptions corr;
  auto* cc = app.add_subcommand("correlate", "Pearson r with bootstrap CI against human ratings");
  cc->add_option("--model-out", corr.model_out, "model output CSV from 'infer'")->required();
  cc->add_option("--human", corr.human, "human ratings CSV")->required();
  cc->add_option("--kind", corr.kind, "goal|statement|both")
      ->check(CLI::IsMember({"goal", "statement", "both"}));
  cc->add_option("--boot", corr.n_boot, "bootstrap resamples")->check(CLI::PositiveNumber);
  cc->add_option("--seed", corr.seed, "bootstrap seed (default: BTOM_SEED or 17)")
      ->each([&corr](const std::string&) { corr.seed_set = true; });

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (ci->parsed()) return cmd_infer(infer);
    if (cs->parsed()) return cmd_series(series);
    return cmd_correlate(corr);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace btom::cli
