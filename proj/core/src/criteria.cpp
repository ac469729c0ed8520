#include "dtp/criteria.hpp"

namespace dtp {

Objective Objective::intention(Direction dir) {
  Objective o;
  o.kind = Kind::Intention;
  o.direction = dir;
  return o;
}

Objective Objective::error(bool use_ade, bool use_fde) {
  if (!use_ade && !use_fde) {
    throw InvalidObjectiveError("error objective must enable ADE, FDE, or both");
  }
  Objective o;
  o.kind = Kind::Error;
  o.use_ade = use_ade;
  o.use_fde = use_fde;
  return o;
}

double Objective::value(const Prediction& pred, const Scene& scene,
                        const AgentId& agent) const {
  if (kind == Kind::Intention) {
    return intention_deviation(pred, scene, agent, direction);
  }
  return combined_error(pred, scene, agent, use_ade, use_fde);
}

std::string Objective::name() const {
  if (kind == Kind::Intention) {
    return to_string(direction);
  }
  if (use_ade && use_fde) return "ade+fde";
  return use_ade ? "ade" : "fde";
}

std::optional<Objective> Objective::parse(std::string_view name) {
  if (const auto dir = parse_direction(name)) {
    return intention(*dir);
  }
  if (name == "ade") return error(true, false);
  if (name == "fde") return error(false, true);
  if (name == "ade+fde") return error(true, true);
  return std::nullopt;
}

ThresholdConfig ThresholdConfig::nuscenes_style() { return {2.0, 3.0, 7.5, 17.5}; }

ThresholdConfig ThresholdConfig::apollo_style() { return {2.0, 3.0, 3.5, 7.5}; }

double ThresholdConfig::active_threshold(const Objective& objective) const {
  if (objective.kind == Objective::Kind::Intention) {
    switch (objective.direction) {
      case Direction::Left:
      case Direction::Right:
        return int_lateral;
      case Direction::Front:
      case Direction::Rear:
        return int_longitudinal;
    }
  }
  double theta = 0.0;
  if (objective.use_ade) theta += ade;
  if (objective.use_fde) theta += fde;
  return theta;
}

void ThresholdConfig::validate() const {
  for (double v : {int_lateral, int_longitudinal, ade, fde}) {
    if (!(v > 0.0)) {
      throw Error("thresholds must be strictly positive");
    }
  }
}

bool evaluate_criterion(const Prediction& pred, const Scene& scene,
                        const Objective& objective, const ThresholdConfig& thresholds) {
  return objective.value(pred, scene, scene.target_agent) >
         thresholds.active_threshold(objective);
}

QueryBudget::QueryBudget(int budget) : budget_(budget) {
  if (budget < 0) {
    throw Error("query budget must be non-negative");
  }
}

void QueryBudget::charge() {
  if (used_ >= budget_) {
    throw BudgetExhaustedError("query budget of " + std::to_string(budget_) +
                               " is exhausted");
  }
  ++used_;
}

bool DecisionOracle::query(const Trajectory& candidate, const Scene& scene) {
  budget_.charge();
  return decide(candidate, scene);
}

Scene with_target_history(const Scene& scene, const Trajectory& candidate) {
  const Trajectory& original = scene.target_history();
  if (candidate.size() != original.size()) {
    throw LengthMismatchError("candidate history length differs from the original");
  }
  Scene out = scene;
  out.histories[scene.target_agent] = candidate;
  return out;
}

QueryOracle::QueryOracle(const PredictorHandle& predictor, Objective objective,
                         ThresholdConfig thresholds, int budget)
    : QueryOracle(make_predictor(predictor), objective, thresholds, budget) {}

QueryOracle::QueryOracle(PredictFn predictor, Objective objective,
                         ThresholdConfig thresholds, int budget)
    : DecisionOracle(budget),
      predict_(std::move(predictor)),
      objective_(objective),
      thresholds_(thresholds) {
  thresholds_.validate();
}

bool QueryOracle::decide(const Trajectory& candidate, const Scene& scene) {
  const Scene attacked = with_target_history(scene, candidate);
  const Prediction pred = predict_(attacked);
  return evaluate_criterion(pred, attacked, objective_, thresholds_);
}

}  // namespace dtp
