#pragma once

#include <functional>
#include <string>

#include "dtp/metrics.hpp"
#include "dtp/predictor.hpp"
#include "dtp/types.hpp"

namespace dtp {

/// What the attacker wants the prediction to do: drift in a lateral or
/// longitudinal direction (Intention), or degrade in accuracy (Error).
/// Exactly one objective is active per attack.
struct Objective {
  enum class Kind { Intention, Error };

  Kind kind = Kind::Error;
  Direction direction = Direction::Left;  // Intention only
  bool use_ade = true;                    // Error only
  bool use_fde = false;                   // Error only

  static Objective intention(Direction dir);
  /// Throws InvalidObjectiveError unless at least one flag is set.
  static Objective error(bool use_ade, bool use_fde);

  /// The raw activation value d_active for this objective: signed intention
  /// deviation along the direction, or the indicator-weighted ADE/FDE sum.
  double value(const Prediction& pred, const Scene& scene, const AgentId& agent) const;

  /// Canonical name: "left", "right", "front", "rear", "ade", "fde", "ade+fde".
  std::string name() const;
  static std::optional<Objective> parse(std::string_view name);
};

/// Activation thresholds in meters, all strictly positive. Left/Right share
/// the lateral threshold, Front/Rear the longitudinal one. The combined
/// ADE+FDE objective uses the sum of the two error thresholds, mirroring the
/// indicator-weighted objective itself.
struct ThresholdConfig {
  double int_lateral = 2.0;
  double int_longitudinal = 3.0;
  double ade = 7.5;
  double fde = 17.5;

  static ThresholdConfig nuscenes_style();  // 2 / 3 / 7.5 / 17.5
  static ThresholdConfig apollo_style();    // 2 / 3 / 3.5 / 7.5

  /// The threshold matched to the objective's active metric.
  double active_threshold(const Objective& objective) const;
  void validate() const;
};

/// True iff the objective's activation strictly exceeds its threshold.
bool evaluate_criterion(const Prediction& pred, const Scene& scene,
                        const Objective& objective, const ThresholdConfig& thresholds);

/// Counts queries against a fixed budget. charge() must precede the work it
/// pays for; it throws once the budget is spent, so used() never passes
/// budget().
class QueryBudget {
public:
  explicit QueryBudget(int budget);
  void charge();
  int used() const noexcept { return used_; }
  int budget() const noexcept { return budget_; }
  int remaining() const noexcept { return budget_ - used_; }

private:
  int budget_;
  int used_ = 0;
};

/// Binary adversarial feedback with budget enforcement: the only signal a
/// decision-based attack is allowed to consume. One oracle serves one attack
/// run; the counter is not synchronized.
class DecisionOracle {
public:
  explicit DecisionOracle(int budget) : budget_(budget) {}
  virtual ~DecisionOracle() = default;

  /// Charges one query, then decides. Throws BudgetExhaustedError when the
  /// budget is already spent (the decision is then not evaluated).
  bool query(const Trajectory& candidate, const Scene& scene);

  int queries_used() const noexcept { return budget_.used(); }
  int budget() const noexcept { return budget_.budget(); }
  int remaining() const noexcept { return budget_.remaining(); }

protected:
  virtual bool decide(const Trajectory& candidate, const Scene& scene) = 0;

private:
  QueryBudget budget_;
};

/// Returns a copy of the scene with `candidate` substituted for the target
/// agent's history. Throws LengthMismatchError if lengths differ.
Scene with_target_history(const Scene& scene, const Trajectory& candidate);

/// The deployed pipeline as one black box: substitute the candidate history,
/// run the predictor, apply the criterion. Exactly one predictor invocation
/// per query.
class QueryOracle final : public DecisionOracle {
public:
  QueryOracle(const PredictorHandle& predictor, Objective objective,
              ThresholdConfig thresholds, int budget);
  QueryOracle(PredictFn predictor, Objective objective, ThresholdConfig thresholds,
              int budget);

  const Objective& objective() const noexcept { return objective_; }
  const ThresholdConfig& thresholds() const noexcept { return thresholds_; }

protected:
  bool decide(const Trajectory& candidate, const Scene& scene) override;

private:
  PredictFn predict_;
  Objective objective_;
  ThresholdConfig thresholds_;
};

/// Arbitrary decision rule under the same budget accounting. Used for
/// analytic toy geometries in tests and benchmarks.
class FunctionDecisionOracle final : public DecisionOracle {
public:
  using DecideFn = std::function<bool(const Trajectory& candidate, const Scene& scene)>;
  FunctionDecisionOracle(DecideFn fn, int budget)
      : DecisionOracle(budget), fn_(std::move(fn)) {}

protected:
  bool decide(const Trajectory& candidate, const Scene& scene) override {
    return fn_(candidate, scene);
  }

private:
  DecideFn fn_;
};

}  // namespace dtp
