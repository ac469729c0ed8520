#include "dtp/attack.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "dtp/metrics.hpp"

namespace dtp {
namespace {

constexpr double kInitSigma0 = 0.5;        // meters, first init sampling scale
constexpr int kForwardInitBisections = 20;
constexpr int kMaxForwardRejections = 60;  // bounds per-iteration query cost
constexpr double kDeltaMin = 1e-4;
constexpr double kDeltaMax = 10.0;
constexpr double kEpsilonMax = 10.0;   // meters; forward_step clamps overshoot anyway
constexpr double kDeltaRecovery = 2.5;  // decay factors restored per acceptance

double flat_norm(const Eigen::VectorXd& v) { return v.norm(); }

}  // namespace

void AttackParams::validate() const {
  if (!(delta0 > 0.0) || !(epsilon0 > 0.0)) {
    throw Error("attack step scales must be positive");
  }
  if (!(delta_decay > 0.0 && delta_decay < 1.0) ||
      !(epsilon_decay > 0.0 && epsilon_decay < 1.0)) {
    throw Error("attack decay factors must lie in (0, 1)");
  }
  if (!(epsilon_tolerance > 0.0) || !(improvement_floor > 0.0)) {
    throw Error("attack tolerances must be positive");
  }
  if (max_iter < 1 || patience < 1 || init_sample_budget < 1 || success_window < 1) {
    throw Error("attack iteration counts must be at least 1");
  }
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::EpsilonTolerance:
      return "epsilon_tolerance";
    case TerminationReason::MaxIter:
      return "max_iter";
    case TerminationReason::BudgetExhausted:
      return "budget_exhausted";
    case TerminationReason::Stalled:
      return "stalled";
    case TerminationReason::InitFailed:
      return "init_failed";
  }
  return "unknown";
}

Trajectory initialize_adversarial(const Scene& scene, DecisionOracle& oracle,
                                  const AttackParams& params, std::mt19937_64& rng) {
  const Trajectory& original = scene.target_history();
  if (oracle.query(original, scene)) {
    return original;
  }

  const Eigen::VectorXd flat0 = flatten_positions(original);
  std::normal_distribution<double> unit_normal(0.0, 1.0);
  for (int attempt = 0; attempt + 1 < params.init_sample_budget; ++attempt) {
    // Scale escalates every 10 attempts and cycles every 100, so bounded
    // adversarial regions stay reachable under large sample budgets.
    const double sigma = kInitSigma0 * std::pow(1.5, (attempt / 10) % 10);
    Eigen::VectorXd flat = flat0;
    for (Eigen::Index i = 0; i < flat.size(); ++i) {
      flat[i] += sigma * unit_normal(rng);
    }
    const Trajectory candidate = with_positions(original, flat);
    if (oracle.query(candidate, scene)) {
      return candidate;
    }
  }
  throw InitFailedError("no adversarial sample within " +
                        std::to_string(params.init_sample_budget) + " queries");
}

Trajectory forward_initialize(const Trajectory& original, const Trajectory& adv,
                              DecisionOracle& oracle, const Scene& scene,
                              const AttackParams& params) {
  (void)params;
  if (trajectory_distance(original, adv) == 0.0) {
    return adv;
  }
  const Eigen::VectorXd orig_flat = flatten_positions(original);
  const Eigen::VectorXd adv_flat = flatten_positions(adv);

  // u parameterizes original (0) -> adv (1); the upper end stays adversarial.
  double lo = 0.0;
  double hi = 1.0;
  Trajectory best = adv;
  for (int i = 0; i < kForwardInitBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    const Trajectory candidate =
        with_positions(original, orig_flat + mid * (adv_flat - orig_flat));
    bool ok = false;
    try {
      ok = oracle.query(candidate, scene);
    } catch (const BudgetExhaustedError&) {
      return best;
    }
    if (ok) {
      hi = mid;
      best = candidate;
    } else {
      lo = mid;
    }
  }
  return best;
}

Trajectory orthogonal_step(const Trajectory& original, const Trajectory& current,
                           double delta, std::mt19937_64& rng) {
  const Eigen::VectorXd orig_flat = flatten_positions(original);
  const Eigen::VectorXd cur_flat = flatten_positions(current);
  const Eigen::VectorXd to_original = orig_flat - cur_flat;
  const double radius = flat_norm(to_original);
  if (radius == 0.0) {
    throw NoDirectionError("orthogonal step undefined at the original trajectory");
  }

  std::normal_distribution<double> unit_normal(0.0, 1.0);
  Eigen::VectorXd perp(cur_flat.size());
  double perp_norm = 0.0;
  // A fresh Gaussian draw is almost surely not parallel to to_original;
  // retry the measure-zero degenerate case a bounded number of times.
  for (int tries = 0; tries < 32; ++tries) {
    Eigen::VectorXd g(cur_flat.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      g[i] = unit_normal(rng);
    }
    perp = g - (g.dot(to_original) / (radius * radius)) * to_original;
    perp_norm = flat_norm(perp);
    if (perp_norm > 1e-12) {
      break;
    }
  }
  if (perp_norm <= 1e-12) {
    throw NoDirectionError("could not draw an orthogonal direction");
  }

  const Eigen::VectorXd raw = cur_flat + perp * (delta * radius / perp_norm);
  // Re-project onto the sphere of radius `radius` around the original:
  // the step preserves distance exactly, not just to first order.
  const Eigen::VectorXd from_original = raw - orig_flat;
  const Eigen::VectorXd projected =
      orig_flat + from_original * (radius / flat_norm(from_original));
  return with_positions(original, projected);
}

Trajectory forward_step(const Trajectory& original, const Trajectory& point,
                        double epsilon) {
  if (epsilon < 0.0) {
    throw Error("forward step size must be non-negative");
  }
  const Eigen::VectorXd orig_flat = flatten_positions(original);
  const Eigen::VectorXd pt_flat = flatten_positions(point);
  const Eigen::VectorXd to_original = orig_flat - pt_flat;
  const double radius = flat_norm(to_original);
  if (radius == 0.0) {
    throw NoDirectionError("forward step undefined at the original trajectory");
  }
  const double distance = trajectory_distance(original, point);
  if (epsilon >= distance) {
    return with_positions(point, orig_flat);  // clamp: land exactly on the original
  }
  // epsilon is rms meters; the flattened step spans sqrt(L) times that.
  const double flat_step = epsilon * std::sqrt(static_cast<double>(point.size()));
  return with_positions(point, pt_flat + to_original * (flat_step / radius));
}

AttackResult run_attack(const Scene& scene, DecisionOracle& oracle,
                        const AttackParams& params) {
  params.validate();
  scene.validate();
  const Trajectory& original = scene.target_history();
  std::mt19937_64 rng(params.rng_seed);

  AttackResult result;
  result.adversarial = original;

  Trajectory current = original;
  try {
    current = initialize_adversarial(scene, oracle, params, rng);
  } catch (const InitFailedError&) {
    result.termination_reason = TerminationReason::InitFailed;
    result.queries_used = oracle.queries_used();
    return result;
  } catch (const BudgetExhaustedError&) {
    result.termination_reason = TerminationReason::BudgetExhausted;
    result.queries_used = oracle.queries_used();
    return result;
  }

  result.success = true;
  Trajectory best = current;
  double best_distance = trajectory_distance(original, current);
  result.trace.push_back({oracle.queries_used(), best_distance});

  const auto accept = [&](const Trajectory& iterate, double distance) {
    if (distance < best_distance) {
      best = iterate;
      best_distance = distance;
    }
    result.trace.push_back({oracle.queries_used(), best_distance});
  };

  current = forward_initialize(original, current, oracle, scene, params);
  double current_distance = trajectory_distance(original, current);
  accept(current, current_distance);

  double delta = params.delta0;
  double epsilon = params.epsilon0;
  std::deque<bool> window;  // last success_window orthogonal outcomes
  int stall = 0;
  TerminationReason reason = TerminationReason::MaxIter;

  try {
    for (int iter = 0; iter < params.max_iter; ++iter) {
      if (epsilon < params.epsilon_tolerance) {
        reason = TerminationReason::EpsilonTolerance;
        break;
      }
      if (oracle.remaining() <= 0) {
        reason = TerminationReason::BudgetExhausted;
        break;
      }
      if (current_distance == 0.0) {
        // The original itself is adversarial: nothing left to minimize.
        reason = TerminationReason::EpsilonTolerance;
        break;
      }

      // Orthogonal phase: walk along the boundary sphere until the oracle
      // accepts, shrinking delta on every rejection.
      Trajectory ortho = current;
      while (true) {
        const Trajectory candidate = orthogonal_step(original, current, delta, rng);
        const bool ok = oracle.query(candidate, scene);
        window.push_back(ok);
        if (static_cast<int>(window.size()) > params.success_window) {
          window.pop_front();
        }
        if (ok) {
          ortho = candidate;
          // Each acceptance restores a few decay factors. Equilibrium sits
          // where decays balance recoveries: rejections per acceptance plus
          // the window gate's push equal kDeltaRecovery, which realizes a
          // 40-50% acceptance rate and keeps delta from drifting to zero
          // at the flat-boundary operating point.
          delta = std::min(delta / std::pow(params.delta_decay, kDeltaRecovery),
                           kDeltaMax);
          break;
        }
        delta = std::max(delta * params.delta_decay, kDeltaMin);
      }

      // Forward phase: pull toward the original until the boundary pushes
      // back. Rejections shrink epsilon until a pull lands inside (or the
      // retry cap ends the phase); each accepted pull recovers epsilon one
      // factor and pulls again, so one iteration harvests all the slack
      // the orthogonal move opened instead of a single epsilon nibble.
      Trajectory next = ortho;
      bool pulled = false;
      for (int rejections = 0;
           rejections < kMaxForwardRejections && epsilon >= params.epsilon_tolerance;) {
        if (trajectory_distance(original, next) == 0.0) {
          break;  // pulled all the way home; the loop-top check terminates
        }
        const Trajectory candidate = forward_step(original, next, epsilon);
        if (oracle.query(candidate, scene)) {
          next = candidate;
          pulled = true;
          // Each accepted pull recovers epsilon one factor, so a run of
          // pulls drains all the slack the orthogonal move opened; the
          // closing rejection decays it again, centering epsilon where
          // the boundary's local flatness admits most proposals.
          epsilon = std::min(epsilon / params.epsilon_decay, kEpsilonMax);
          continue;
        }
        epsilon *= params.epsilon_decay;
        ++rejections;
        if (pulled) {
          break;  // boundary reached: the slack from this iteration is spent
        }
      }

      const double previous_distance = current_distance;
      current = next;
      current_distance = trajectory_distance(original, current);
      accept(current, current_distance);

      // Keep roughly half the orthogonal proposals inside the adversarial
      // region by steering delta with the recent acceptance rate.
      if (!window.empty()) {
        const auto successes = std::count(window.begin(), window.end(), true);
        const double rate =
            static_cast<double>(successes) / static_cast<double>(window.size());
        if (rate > 0.6) {
          delta /= params.delta_decay;
        } else if (rate < 0.4) {
          delta *= params.delta_decay;
        }
        delta = std::clamp(delta, kDeltaMin, kDeltaMax);
      }

      if (previous_distance - current_distance < params.improvement_floor) {
        if (++stall >= params.patience) {
          reason = TerminationReason::Stalled;
          break;
        }
      } else {
        stall = 0;
      }
    }
  } catch (const BudgetExhaustedError&) {
    reason = TerminationReason::BudgetExhausted;
  }

  result.adversarial = best;
  result.final_distance = best_distance;
  result.queries_used = oracle.queries_used();
  result.termination_reason = reason;
  return result;
}

}  // namespace dtp
