#pragma once

#include <string>
#include <vector>

#include "btom/inference.hpp"

namespace btom {

enum class ModelKind { Btom, HeuristicMentalizer, NonMentalizing, Omniscient, Ignorant };

inline std::string model_name(ModelKind k) {
  switch (k) {
    case ModelKind::Btom: return "btom";
    case ModelKind::HeuristicMentalizer: return "heuristic";
    case ModelKind::NonMentalizing: return "nonmental";
    case ModelKind::Omniscient: return "omniscient";
    case ModelKind::Ignorant: return "ignorant";
  }
  return "?";
}

inline ModelKind parse_model_kind(const std::string& s) {
  if (s == "btom") return ModelKind::Btom;
  if (s == "heuristic") return ModelKind::HeuristicMentalizer;
  if (s == "nonmental") return ModelKind::NonMentalizing;
  if (s == "omniscient") return ModelKind::Omniscient;
  if (s == "ignorant") return ModelKind::Ignorant;
  throw ValidationError("unknown model '" + s + "'");
}

// Rates a statement by evaluating it against the ground-truth initial state:
// what an observer who already knows everything would say.
inline double omniscient_score(const Scenario& sc, const EpistemicStatement& psi) {
  WorldState truth = sc.truth_initial_state();
  return evaluate(*psi.body, truth, sc.sig) ? 1.0 : 0.0;
}

// Negation as failure: nothing can be deduced, so every statement is false.
inline double ignorant_score(const EpistemicStatement&) { return 0.0; }

// Prior probability of the statement being true under the state prior,
// ignoring the trajectory entirely.
inline double nonmentalizing_score(const HypothesisSpace& space, const ModelSignature& sig,
                                   const EpistemicStatement& psi) {
  double p = 0.0;
  for (size_t s = 0; s < space.initial_states.size(); ++s)
    if (evaluate(*psi.body, space.initial_states[s], sig)) p += space.state_prior[s];
  return p;
}

// Assumes agents simply move physically closer to the goal: Q̂ is the maze
// distance (locked doors passable) from the post-action position to the goal
// gem's cell. Non-move actions leave the distance unchanged, so instrumental
// acts like key pickups earn no credit.
class HeuristicCostModel : public CostModel {
 public:
  explicit HeuristicCostModel(const GridMap& map) : map_(map), relaxed_(map) {}

  std::optional<int> action_cost(const WorldState& s, const Action& a, int goal) override {
    Cell pos = a.kind == Action::Kind::Move ? step_cell(s.agent, a.dir) : s.agent;
    int d = relaxed_.to_gem_cell(goal, pos);
    if (d < 0) return std::nullopt;
    return d;
  }

 private:
  const GridMap& map_;
  RelaxedDistances relaxed_;
};

inline double heuristic_mentalizer_likelihood(const WorldState& s, const Action& a, int goal,
                                              const GridMap& map, double beta_h) {
  HeuristicCostModel model(map);
  return action_likelihood(s, a, goal, beta_h, map, model);
}

struct ModelRunConfig {
  ModelKind kind = ModelKind::Btom;
  BeliefPrior prior = BeliefPrior::UniformStatement;
  EvalAt eval_at = EvalAt::Initial;
  double beta = 2.5;
  PlannerConfig planner;
  size_t enumeration_cap = 1000000;
};

namespace detail {

// Static observers: per-statement constants replicated at every judgment point.
inline std::vector<JudgmentOutput> run_static_model(const Scenario& sc, const ModelRunConfig& cfg) {
  HypothesisSpace space = expand_hypothesis_space(sc, cfg.beta, cfg.enumeration_cap);
  std::vector<JudgmentOutput::StatementScore> scores;
  for (const auto& st : sc.statements) {
    double p = 0.0;
    switch (cfg.kind) {
      case ModelKind::Omniscient: p = omniscient_score(sc, st.parsed); break;
      case ModelKind::Ignorant: p = ignorant_score(st.parsed); break;
      default: p = nonmentalizing_score(space, sc.sig, st.parsed); break;
    }
    scores.push_back({st.id, p, {}});
  }
  std::string prior = cfg.kind == ModelKind::NonMentalizing ? "states" : "-";
  std::vector<JudgmentOutput> outputs;
  for (int j : sc.judgment_points) {
    JudgmentOutput o;
    o.scenario_id = sc.id;
    o.step = j;
    o.model = model_name(cfg.kind);
    o.prior = prior;
    o.statement_probs = scores;
    outputs.push_back(std::move(o));
  }
  return outputs;
}

}  // namespace detail

// Single entry point for every model: outputs are column-compatible across
// kinds so downstream analysis does not care which model produced them.
inline std::vector<JudgmentOutput> run_model(const Scenario& sc, const ModelRunConfig& cfg) {
  switch (cfg.kind) {
    case ModelKind::Btom: {
      Planner planner(sc.map, cfg.planner);
      PlannerCostModel model(planner);
      HypothesisSpace space = expand_hypothesis_space(sc, cfg.beta, cfg.enumeration_cap);
      RunConfig rc{model_name(cfg.kind), cfg.prior, cfg.eval_at, cfg.enumeration_cap};
      return run_judgments(sc, space, rc, model);
    }
    case ModelKind::HeuristicMentalizer: {
      HeuristicCostModel model(sc.map);
      HypothesisSpace space = expand_hypothesis_space(sc, cfg.beta, cfg.enumeration_cap);
      RunConfig rc{model_name(cfg.kind), cfg.prior, cfg.eval_at, cfg.enumeration_cap};
      return run_judgments(sc, space, rc, model);
    }
    default:
      return detail::run_static_model(sc, cfg);
  }
}

// Per-step series; only meaningful for the filtering models.
inline std::vector<SeriesPoint> run_model_series(const Scenario& sc, const ModelRunConfig& cfg) {
  if (cfg.kind != ModelKind::Btom && cfg.kind != ModelKind::HeuristicMentalizer)
    throw ValidationError("series requires a filtering model (btom or heuristic)");
  HypothesisSpace space = expand_hypothesis_space(sc, cfg.beta, cfg.enumeration_cap);
  RunConfig rc{model_name(cfg.kind), cfg.prior, cfg.eval_at, cfg.enumeration_cap};
  if (cfg.kind == ModelKind::Btom) {
    Planner planner(sc.map, cfg.planner);
    PlannerCostModel model(planner);
    return run_series(sc, space, rc, model);
  }
  HeuristicCostModel model(sc.map);
  return run_series(sc, space, rc, model);
}

}  // namespace btom
