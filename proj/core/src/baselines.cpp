#include "dtp/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "dtp/error.hpp"
#include "dtp/metrics.hpp"

namespace dtp {
namespace {

// Shared bookkeeping for the comparison with the decision-based attack:
// track the best criterion-satisfying candidate by distance and append a
// trace point per satisfying evaluation, mirroring the walk's trace.
struct SuccessTracker {
  const Trajectory* original;
  AttackResult* result;
  double best_distance = std::numeric_limits<double>::infinity();

  void record(const Trajectory& candidate, bool satisfied, int queries_used) {
    if (!satisfied) {
      return;
    }
    const double d = trajectory_distance(*original, candidate);
    if (d < best_distance) {
      best_distance = d;
    }
    result->trace.push_back({queries_used, best_distance});
  }
};

}  // namespace

double ScoreOracle::score(const Trajectory& candidate, const Scene& scene) {
  budget_.charge();
  return evaluate(candidate, scene);
}

PredictorScoreOracle::PredictorScoreOracle(const PredictorHandle& handle,
                                           Objective objective,
                                           ThresholdConfig thresholds, int budget)
    : ScoreOracle(objective, thresholds, budget), predict_(make_predictor(handle)) {}

PredictorScoreOracle::PredictorScoreOracle(PredictFn predict_fn, Objective objective,
                                           ThresholdConfig thresholds, int budget)
    : ScoreOracle(objective, thresholds, budget), predict_(std::move(predict_fn)) {}

double PredictorScoreOracle::evaluate(const Trajectory& candidate,
                                      const Scene& scene) {
  const Scene substituted = with_target_history(scene, candidate);
  const Prediction pred = predict_(substituted);
  return objective().value(pred, scene, scene.target_agent);
}

bool NormBall::contains(const Trajectory& candidate, double slack) const {
  const Eigen::VectorXd diff =
      flatten_positions(candidate) - flatten_positions(center);
  const double measure =
      norm == BallNorm::Linf ? diff.lpNorm<Eigen::Infinity>() : diff.norm();
  return measure <= radius + slack;
}

Trajectory NormBall::clip(const Trajectory& candidate) const {
  const Eigen::VectorXd center_flat = flatten_positions(center);
  Eigen::VectorXd diff = flatten_positions(candidate) - center_flat;
  if (norm == BallNorm::Linf) {
    diff = diff.cwiseMax(-radius).cwiseMin(radius);
  } else {
    const double n = diff.norm();
    if (n > radius) {
      diff *= radius / n;
    }
  }
  return with_positions(center, center_flat + diff);
}

void NormBall::validate() const {
  if (center.empty()) {
    throw Error("norm ball needs a non-empty center");
  }
  if (!(radius > 0.0)) {
    throw Error("norm ball radius must be positive");
  }
}

NormBall derive_ball(const AttackResult& dtp_result, const Trajectory& original) {
  if (!dtp_result.success) {
    throw NoBoundError("cannot derive a perturbation bound from a failed attack");
  }
  const Eigen::VectorXd diff = flatten_positions(dtp_result.adversarial) -
                               flatten_positions(original);
  const double radius = diff.lpNorm<Eigen::Infinity>();
  if (radius == 0.0) {
    throw NoBoundError("zero perturbation gives a degenerate bound");
  }
  return NormBall{original, radius, BallNorm::Linf};
}

void PsoParams::validate() const {
  if (swarm_size < 2) {
    throw Error("swarm needs at least 2 particles");
  }
  if (!(inertia > 0.0) || !(cognitive > 0.0) || !(social > 0.0)) {
    throw Error("swarm coefficients must be positive");
  }
}

AttackResult pso_attack(const Scene& scene, ScoreOracle& oracle,
                        const NormBall& ball, const PsoParams& params) {
  params.validate();
  ball.validate();
  scene.validate();
  if (oracle.remaining() < params.swarm_size) {
    throw Error("budget cannot cover one swarm evaluation");
  }

  const Trajectory& original = scene.target_history();
  const Eigen::VectorXd center = flatten_positions(ball.center);
  const Eigen::Index dims = center.size();
  std::mt19937_64 rng(params.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  AttackResult result;
  result.adversarial = original;
  result.termination_reason = TerminationReason::BudgetExhausted;
  SuccessTracker tracker{&original, &result};

  struct Particle {
    Eigen::VectorXd position;  // perturbation, not absolute coordinates
    Eigen::VectorXd velocity;
    Eigen::VectorXd best_position;
    double best_score = -std::numeric_limits<double>::infinity();
  };

  std::vector<Particle> swarm(static_cast<std::size_t>(params.swarm_size));
  for (Particle& p : swarm) {
    p.position.resize(dims);
    for (Eigen::Index i = 0; i < dims; ++i) {
      p.position[i] = sym(rng) * ball.radius;
    }
    p.velocity = Eigen::VectorXd::Zero(dims);
    p.best_position = p.position;
  }

  Eigen::VectorXd global_best = swarm.front().position;
  double global_best_score = -std::numeric_limits<double>::infinity();

  const auto evaluate = [&](Particle& p) {
    const Trajectory candidate =
        ball.clip(with_positions(ball.center, center + p.position));
    // Keep the state on the clipped point so the swarm never accumulates
    // momentum outside the ball, whatever the ball's norm.
    p.position = flatten_positions(candidate) - center;
    const double s = oracle.score(candidate, scene);
    tracker.record(candidate, oracle.adversarial(s), oracle.queries_used());
    if (s > p.best_score) {
      p.best_score = s;
      p.best_position = p.position;
    }
    if (s > global_best_score) {
      global_best_score = s;
      global_best = p.position;
    }
  };

  try {
    for (Particle& p : swarm) {
      evaluate(p);
    }
    while (oracle.remaining() > 0) {
      for (Particle& p : swarm) {
        for (Eigen::Index i = 0; i < dims; ++i) {
          p.velocity[i] = params.inertia * p.velocity[i] +
                          params.cognitive * unit(rng) *
                              (p.best_position[i] - p.position[i]) +
                          params.social * unit(rng) * (global_best[i] - p.position[i]);
        }
        p.position += p.velocity;
        evaluate(p);  // evaluate() clips the state back into the ball
      }
    }
  } catch (const BudgetExhaustedError&) {
    // Return the global best found with the spent budget.
  }

  result.adversarial = ball.clip(with_positions(ball.center, center + global_best));
  result.final_distance = trajectory_distance(original, result.adversarial);
  result.success = oracle.adversarial(global_best_score);
  result.queries_used = oracle.queries_used();
  return result;
}

AttackResult simba_attack(const Scene& scene, ScoreOracle& oracle,
                          const NormBall& ball, double step,
                          std::uint64_t rng_seed) {
  if (!(step > 0.0)) {
    throw Error("coordinate step must be positive");
  }
  ball.validate();
  scene.validate();

  const Trajectory& original = scene.target_history();
  const Eigen::VectorXd center = flatten_positions(ball.center);
  const Eigen::Index dims = center.size();
  std::mt19937_64 rng(rng_seed);

  AttackResult result;
  result.adversarial = original;
  result.termination_reason = TerminationReason::BudgetExhausted;
  SuccessTracker tracker{&original, &result};

  Eigen::VectorXd current = Eigen::VectorXd::Zero(dims);
  double current_score = -std::numeric_limits<double>::infinity();
  Trajectory current_trajectory = ball.clip(with_positions(ball.center, center));

  const auto try_candidate = [&](const Eigen::VectorXd& perturbation) {
    const Trajectory candidate =
        ball.clip(with_positions(ball.center, center + perturbation));
    const double s = oracle.score(candidate, scene);
    tracker.record(candidate, oracle.adversarial(s), oracle.queries_used());
    if (s > current_score) {
      current = flatten_positions(candidate) - center;  // post-clip state
      current_score = s;
      current_trajectory = candidate;
      return true;
    }
    return false;
  };

  std::vector<Eigen::Index> order(static_cast<std::size_t>(dims));
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  try {
    try_candidate(current);  // baseline score of the unperturbed center
    while (oracle.remaining() > 0) {
      std::shuffle(order.begin(), order.end(), rng);
      for (const Eigen::Index coord : order) {
        Eigen::VectorXd plus = current;
        plus[coord] += step;
        if (try_candidate(plus)) {
          continue;  // keep the improvement; -step would just undo it
        }
        Eigen::VectorXd minus = current;
        minus[coord] -= step;
        try_candidate(minus);
      }
    }
  } catch (const BudgetExhaustedError&) {
    // Keep the best state reached with the spent budget.
  }

  result.adversarial = current_trajectory;
  result.final_distance = trajectory_distance(original, result.adversarial);
  result.success = oracle.adversarial(current_score);
  result.queries_used = oracle.queries_used();
  return result;
}

AttackResult random_attack(const Scene& scene, DecisionOracle& oracle,
                           const NormBall& ball, std::uint64_t rng_seed) {
  ball.validate();
  scene.validate();
  if (oracle.remaining() < 1) {
    throw Error("random search needs at least one query");
  }

  const Trajectory& original = scene.target_history();
  const Eigen::VectorXd center = flatten_positions(ball.center);
  const Eigen::Index dims = center.size();
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);

  AttackResult result;
  result.adversarial = original;
  result.termination_reason = TerminationReason::BudgetExhausted;

  double best_distance = std::numeric_limits<double>::infinity();
  try {
    while (oracle.remaining() > 0) {
      Eigen::VectorXd perturbation(dims);
      for (Eigen::Index i = 0; i < dims; ++i) {
        perturbation[i] = sym(rng) * ball.radius;
      }
      const Trajectory candidate =
          ball.clip(with_positions(ball.center, center + perturbation));
      if (!oracle.query(candidate, scene)) {
        continue;
      }
      const double d = trajectory_distance(original, candidate);
      if (d < best_distance) {
        best_distance = d;
        result.adversarial = candidate;
        result.success = true;
        result.final_distance = d;
      }
      result.trace.push_back({oracle.queries_used(), best_distance});
    }
  } catch (const BudgetExhaustedError&) {
    // Minimum-distance satisfying sample (if any) already recorded.
  }

  result.queries_used = oracle.queries_used();
  return result;
}

}  // namespace dtp
