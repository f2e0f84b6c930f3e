#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "btom/outputs.hpp"
#include "btom/planner.hpp"
#include "btom/scenario.hpp"

namespace btom {

// Supplies the estimated cost-to-goal after taking an action. The full model
// plugs in plan costs; the heuristic-mentalizer baseline plugs in raw maze
// distance. The filter itself is agnostic.
class CostModel {
 public:
  virtual ~CostModel() = default;
  // Q̂(s, a, g); nullopt when the goal is unreachable after a. The action is
  // guaranteed legal in s by the caller.
  virtual std::optional<int> action_cost(const WorldState& s, const Action& a, int goal) = 0;
};

class PlannerCostModel : public CostModel {
 public:
  explicit PlannerCostModel(Planner& planner) : planner_(planner) {}
  std::optional<int> action_cost(const WorldState& s, const Action& a, int goal) override {
    return planner_.q_value(s, a, goal);
  }

 private:
  Planner& planner_;
};

// Probabilities and logs for every legal action, in legal_actions order.
struct ActionDistribution {
  std::vector<Action> actions;
  std::vector<double> probs;
  std::vector<double> log_probs;
};

// Boltzmann selection over the legal actions: p(a) ∝ exp(-β·Q̂). Actions with
// unreachable goals get probability 0; if every legal action is unreachable
// the distribution falls back to uniform (cost-indifference).
inline ActionDistribution action_distribution(const WorldState& s, int goal, double beta,
                                              const GridMap& map, CostModel& model) {
  ActionDistribution dist;
  dist.actions = legal_actions(s, map);
  const size_t n = dist.actions.size();
  dist.probs.assign(n, 0.0);
  dist.log_probs.assign(n, kNegInf);
  if (n == 0) return dist;

  std::vector<std::optional<int>> q(n);
  std::optional<int> qmin;
  for (size_t i = 0; i < n; ++i) {
    q[i] = model.action_cost(s, dist.actions[i], goal);
    if (q[i] && (!qmin || *q[i] < *qmin)) qmin = q[i];
  }
  if (!qmin) {  // goal unreachable whatever happens: uniform over legal
    double p = 1.0 / static_cast<double>(n);
    double lp = -std::log(static_cast<double>(n));
    dist.probs.assign(n, p);
    dist.log_probs.assign(n, lp);
    return dist;
  }
  double z = 0.0;
  std::vector<double> expo(n, kNegInf);
  for (size_t i = 0; i < n; ++i) {
    if (!q[i]) continue;
    expo[i] = -beta * static_cast<double>(*q[i] - *qmin);
    z += std::exp(expo[i]);
  }
  double logz = std::log(z);
  for (size_t i = 0; i < n; ++i) {
    if (!q[i]) continue;
    dist.probs[i] = std::exp(expo[i]) / z;
    dist.log_probs[i] = expo[i] - logz;
  }
  return dist;
}

// P(a | s, g): zero for illegal actions, Boltzmann otherwise.
inline double action_likelihood(const WorldState& s, const Action& a, int goal, double beta,
                                const GridMap& map, CostModel& model) {
  if (!action_legal(s, a, map)) return 0.0;
  auto dist = action_distribution(s, goal, beta, map, model);
  for (size_t i = 0; i < dist.actions.size(); ++i)
    if (dist.actions[i] == a) return dist.probs[i];
  return 0.0;
}

inline double action_log_likelihood(const WorldState& s, const Action& a, int goal, double beta,
                                    const GridMap& map, CostModel& model) {
  if (!action_legal(s, a, map)) return kNegInf;
  auto dist = action_distribution(s, goal, beta, map, model);
  for (size_t i = 0; i < dist.actions.size(); ++i)
    if (dist.actions[i] == a) return dist.log_probs[i];
  return kNegInf;
}

// One (goal, initial state) pair tracked through the filter.
struct Hypothesis {
  int goal_index = 0;   // into HypothesisSpace::goals
  int state_index = 0;  // into HypothesisSpace::initial_states
  WorldState current;
  double log_weight = 0.0;

  bool eliminated() const { return log_weight == kNegInf; }
};

struct FilterState {
  std::vector<Hypothesis> hypotheses;
  int step = 0;
  // normalized goal marginal after each observed action; index 0 = prior
  std::vector<std::vector<double>> marginal_trace;
};

namespace detail {

inline std::vector<double> marginal_from(const std::vector<Hypothesis>& hyps, size_t n_goals) {
  double m = kNegInf;
  for (const auto& h : hyps) m = std::max(m, h.log_weight);
  if (m == kNegInf)
    throw AllHypothesesEliminated("all hypotheses have zero weight", -1);
  std::vector<double> per_goal(n_goals, 0.0);
  for (const auto& h : hyps)
    if (!h.eliminated()) per_goal[h.goal_index] += std::exp(h.log_weight - m);
  double total = 0.0;
  for (double v : per_goal) total += v;
  for (double& v : per_goal) v /= total;
  return per_goal;
}

}  // namespace detail

// One hypothesis per (goal, initial state) pair, weight = P(g)·P(s0).
inline FilterState init_filter(const HypothesisSpace& space, size_t enumeration_cap = 1000000) {
  size_t n = space.goals.size() * space.initial_states.size();
  if (n > enumeration_cap)
    throw HypothesisSpaceTooLarge("hypothesis count " + std::to_string(n) + " exceeds cap " +
                                  std::to_string(enumeration_cap));
  FilterState fs;
  fs.hypotheses.reserve(n);
  for (size_t g = 0; g < space.goals.size(); ++g) {
    for (size_t s = 0; s < space.initial_states.size(); ++s) {
      Hypothesis h;
      h.goal_index = static_cast<int>(g);
      h.state_index = static_cast<int>(s);
      h.current = space.initial_states[s];
      h.log_weight = std::log(space.goal_prior[g]) + std::log(space.state_prior[s]);
      fs.hypotheses.push_back(std::move(h));
    }
  }
  fs.marginal_trace.push_back(detail::marginal_from(fs.hypotheses, space.goals.size()));
  return fs;
}

// Multiply every weight by the likelihood of the observed action and advance
// the simulated state. Hypotheses in which the action is illegal drop to zero
// weight and freeze.
inline FilterState step_filter(FilterState fs, const Action& observed, const HypothesisSpace& space,
                               const GridMap& map, CostModel& model) {
  bool any_alive = false;
  for (auto& h : fs.hypotheses) {
    if (h.eliminated()) continue;
    if (!action_legal(h.current, observed, map)) {
      h.log_weight = kNegInf;
      continue;
    }
    int goal = space.goals[h.goal_index];
    h.log_weight += action_log_likelihood(h.current, observed, goal, space.beta, map, model);
    h.current = transition(h.current, observed, map);
    if (!h.eliminated()) any_alive = true;
  }
  fs.step += 1;
  if (!any_alive)
    throw AllHypothesesEliminated(
        "all hypotheses eliminated after observing step " + std::to_string(fs.step), fs.step);
  fs.marginal_trace.push_back(detail::marginal_from(fs.hypotheses, space.goals.size()));
  return fs;
}

// Marginal over goals, aligned with space.goals; sums to 1.
inline std::vector<double> goal_posterior(const FilterState& fs, const HypothesisSpace& space) {
  return detail::marginal_from(fs.hypotheses, space.goals.size());
}

enum class BeliefPrior { UniformStates, UniformStatement };
enum class EvalAt { Initial, Current };

inline std::string prior_name(BeliefPrior p) {
  return p == BeliefPrior::UniformStates ? "states" : "statements";
}

struct StatementScore {
  double probability = 0.0;
  // one side of the true/false partition is empty over the hypothesis space
  bool degenerate = false;
};

// Expected truth value of the statement body over the inferred belief
// distribution. UniformStates weighs hypotheses by posterior weight; the
// UniformStatement prior reweights so the statement is a-priori 50/50 and
// returns the normalized likelihood comparing evidence for ψ versus ¬ψ.
inline StatementScore score_statement(const FilterState& fs, const HypothesisSpace& space,
                                      const ModelSignature& sig, const EpistemicStatement& psi,
                                      BeliefPrior prior, EvalAt eval_at = EvalAt::Initial) {
  const size_t n = fs.hypotheses.size();
  std::vector<char> truth(n, 0);
  for (size_t i = 0; i < n; ++i) {
    const Hypothesis& h = fs.hypotheses[i];
    const WorldState& s =
        eval_at == EvalAt::Initial ? space.initial_states[h.state_index] : h.current;
    truth[i] = evaluate(*psi.body, s, sig) ? 1 : 0;
  }
  size_t n_true = 0;
  for (char t : truth) n_true += t;
  StatementScore out;
  if (n_true == 0 || n_true == n) {
    // contradiction / tautology over the space: evidence cannot move it
    out.degenerate = true;
    out.probability = n_true == n ? 1.0 : 0.0;
    return out;
  }

  double m = kNegInf;
  if (prior == BeliefPrior::UniformStates) {
    for (const auto& h : fs.hypotheses) m = std::max(m, h.log_weight);
    if (m == kNegInf) throw AllHypothesesEliminated("all hypotheses have zero weight", fs.step);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (fs.hypotheses[i].eliminated()) continue;
      double w = std::exp(fs.hypotheses[i].log_weight - m);
      den += w;
      if (truth[i]) num += w;
    }
    out.probability = num / den;
    return out;
  }

  // UniformStatement: strip the prior out of each weight to get the pure
  // trajectory likelihood L_i, then compare the mean likelihood of ψ-worlds
  // against ¬ψ-worlds.
  std::vector<double> log_lik(n);
  for (size_t i = 0; i < n; ++i) {
    const Hypothesis& h = fs.hypotheses[i];
    double log_prior = std::log(space.goal_prior[h.goal_index]) +
                       std::log(space.state_prior[h.state_index]);
    log_lik[i] = h.log_weight - log_prior;
    m = std::max(m, log_lik[i]);
  }
  if (m == kNegInf) throw AllHypothesesEliminated("all hypotheses have zero weight", fs.step);
  double sum_true = 0.0, sum_false = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (log_lik[i] == kNegInf) continue;
    double l = std::exp(log_lik[i] - m);
    if (truth[i])
      sum_true += l;
    else
      sum_false += l;
  }
  double a = sum_true / static_cast<double>(n_true);
  double b = sum_false / static_cast<double>(n - n_true);
  out.probability = a / (a + b);
  return out;
}

struct RunConfig {
  std::string model_name = "btom";
  BeliefPrior prior = BeliefPrior::UniformStatement;
  EvalAt eval_at = EvalAt::Initial;
  size_t enumeration_cap = 1000000;
};

// Replay the trajectory through the filter, recording goal marginals and
// statement scores at every judgment point.
inline std::vector<JudgmentOutput> run_judgments(const Scenario& sc, const HypothesisSpace& space,
                                                 const RunConfig& cfg, CostModel& model) {
  std::vector<JudgmentOutput> outputs;
  FilterState fs = init_filter(space, cfg.enumeration_cap);

  auto record = [&](const FilterState& state) {
    JudgmentOutput o;
    o.scenario_id = sc.id;
    o.step = state.step;
    o.model = cfg.model_name;
    o.prior = prior_name(cfg.prior);
    auto marginal = goal_posterior(state, space);
    for (size_t g = 0; g < space.goals.size(); ++g)
      o.goal_probs.emplace_back(sc.map.gems[space.goals[g]].id, marginal[g]);
    for (const auto& st : sc.statements) {
      auto score = score_statement(state, space, sc.sig, st.parsed, cfg.prior, cfg.eval_at);
      JudgmentOutput::StatementScore row{st.id, score.probability, {}};
      if (score.degenerate) row.flags.push_back("degenerate_partition");
      o.statement_probs.push_back(std::move(row));
    }
    outputs.push_back(std::move(o));
  };

  size_t next_judgment = 0;
  auto maybe_record = [&](int step) {
    if (next_judgment < sc.judgment_points.size() && sc.judgment_points[next_judgment] == step) {
      record(fs);
      ++next_judgment;
    }
  };
  maybe_record(0);
  for (size_t t = 0; t < sc.trajectory.size(); ++t) {
    fs = step_filter(std::move(fs), sc.trajectory[t], space, sc.map, model);
    maybe_record(static_cast<int>(t) + 1);
  }
  return outputs;
}

// Per-step probability series over the whole trajectory (step 0 = prior).
struct SeriesPoint {
  int step = 0;
  std::vector<double> goal_probs;       // aligned with space.goals
  std::vector<double> statement_probs;  // aligned with sc.statements
};

inline std::vector<SeriesPoint> run_series(const Scenario& sc, const HypothesisSpace& space,
                                           const RunConfig& cfg, CostModel& model) {
  std::vector<SeriesPoint> series;
  FilterState fs = init_filter(space, cfg.enumeration_cap);
  auto snap = [&]() {
    SeriesPoint p;
    p.step = fs.step;
    p.goal_probs = goal_posterior(fs, space);
    for (const auto& st : sc.statements)
      p.statement_probs.push_back(
          score_statement(fs, space, sc.sig, st.parsed, cfg.prior, cfg.eval_at).probability);
    series.push_back(std::move(p));
  };
  snap();
  for (const auto& a : sc.trajectory) {
    fs = step_filter(std::move(fs), a, space, sc.map, model);
    snap();
  }
  return series;
}

}  // namespace btom
