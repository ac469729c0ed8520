#pragma once

// Score-based black-box baselines competing with the decision-based attack
// under the same query budget. They see the raw objective score through a
// ScoreOracle (never available to the decision-based walk) and search a
// norm ball derived from a prior decision-based result, so the comparison
// runs both families against identical budgets and perturbation bounds.

#include <cstdint>
#include <functional>

#include "dtp/attack.hpp"
#include "dtp/criteria.hpp"
#include "dtp/predictor.hpp"
#include "dtp/types.hpp"

namespace dtp {

/// Continuous objective feedback with the same budget accounting as the
/// binary oracle. score() charges one query, then returns d_active; the
/// criterion verdict for a known score is a free threshold comparison.
class ScoreOracle {
public:
  ScoreOracle(Objective objective, ThresholdConfig thresholds, int budget)
      : objective_(objective), thresholds_(thresholds), budget_(budget) {}
  virtual ~ScoreOracle() = default;

  /// Charges one query, then evaluates. Throws BudgetExhaustedError when
  /// the budget is already spent (the candidate is then not evaluated).
  double score(const Trajectory& candidate, const Scene& scene);

  /// Judges a score already paid for; consumes no budget. Same strict
  /// comparison the binary oracle applies.
  bool adversarial(double score) const {
    return score > thresholds_.active_threshold(objective_);
  }

  const Objective& objective() const noexcept { return objective_; }
  const ThresholdConfig& thresholds() const noexcept { return thresholds_; }
  int queries_used() const noexcept { return budget_.used(); }
  int budget() const noexcept { return budget_.budget(); }
  int remaining() const noexcept { return budget_.remaining(); }

protected:
  virtual double evaluate(const Trajectory& candidate, const Scene& scene) = 0;

private:
  Objective objective_;
  ThresholdConfig thresholds_;
  QueryBudget budget_;
};

/// Scores candidates by substituting the target history and running the
/// predictor, mirroring QueryOracle but exposing the continuous value.
class PredictorScoreOracle final : public ScoreOracle {
public:
  PredictorScoreOracle(const PredictorHandle& handle, Objective objective,
                       ThresholdConfig thresholds, int budget);
  PredictorScoreOracle(PredictFn predict_fn, Objective objective,
                       ThresholdConfig thresholds, int budget);

protected:
  double evaluate(const Trajectory& candidate, const Scene& scene) override;

private:
  PredictFn predict_;
};

/// Test seam: scores come from a plain function.
class FunctionScoreOracle final : public ScoreOracle {
public:
  using ScoreFn = std::function<double(const Trajectory& candidate, const Scene&)>;
  FunctionScoreOracle(ScoreFn fn, Objective objective, ThresholdConfig thresholds,
                      int budget)
      : ScoreOracle(objective, thresholds, budget), fn_(std::move(fn)) {}

protected:
  double evaluate(const Trajectory& candidate, const Scene& scene) override {
    return fn_(candidate, scene);
  }

private:
  ScoreFn fn_;
};

enum class BallNorm { Linf, L2 };

/// The baseline search region: trajectories within radius of the center
/// under the chosen norm, measured on flattened coordinates.
struct NormBall {
  Trajectory center;
  double radius = 0.0;  // meters
  BallNorm norm = BallNorm::Linf;

  bool contains(const Trajectory& candidate, double slack = 1e-9) const;
  Trajectory clip(const Trajectory& candidate) const;
  void validate() const;  // radius > 0, non-empty center
};

/// Bounds the baselines by what the decision-based attack achieved: an
/// Linf ball whose radius is the largest per-coordinate deviation of the
/// adversarial trajectory from the original. Throws NoBoundError when the
/// result failed or the perturbation is zero.
NormBall derive_ball(const AttackResult& dtp_result, const Trajectory& original);

struct PsoParams {
  int swarm_size = 20;
  double inertia = 0.7;    // w
  double cognitive = 1.5;  // c1, pull toward each particle's own best
  double social = 1.5;     // c2, pull toward the global best
  std::uint64_t rng_seed = 0;

  void validate() const;  // swarm_size >= 2, coefficients > 0
};

/// Particle swarm ascent of the raw score over perturbations clipped to
/// the ball after every update. Needs budget for at least one full swarm
/// evaluation. Returns the global-best candidate; success says whether it
/// crosses the criterion threshold. The trace records the running minimum
/// distance over criterion-satisfying evaluations.
AttackResult pso_attack(const Scene& scene, ScoreOracle& oracle,
                        const NormBall& ball, const PsoParams& params);

/// Greedy coordinate search: walk a reshuffled coordinate permutation,
/// trying +step then -step per coordinate, keeping strict improvements,
/// clipped to the ball. Runs until the budget is spent.
AttackResult simba_attack(const Scene& scene, ScoreOracle& oracle,
                          const NormBall& ball, double step,
                          std::uint64_t rng_seed);

/// Floor baseline: uniform samples in the ball judged by the binary
/// criterion; returns the minimum-distance satisfying sample.
AttackResult random_attack(const Scene& scene, DecisionOracle& oracle,
                           const NormBall& ball, std::uint64_t rng_seed);

}  // namespace dtp
