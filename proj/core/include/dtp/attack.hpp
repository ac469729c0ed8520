#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dtp/criteria.hpp"
#include "dtp/types.hpp"

namespace dtp {

/// Knobs of the boundary-walking attack. Defaults follow the reference
/// configuration; validate() enforces the documented domains.
struct AttackParams {
  double delta0 = 1.0;            // initial orthogonal scale, relative to distance
  double epsilon0 = 0.1;          // initial forward step, meters (rms)
  double delta_decay = 0.95;      // orthogonal shrink factor on rejection
  double epsilon_decay = 0.9;     // forward shrink factor on rejection
  double epsilon_tolerance = 1e-6;  // meters: converged when epsilon falls below
  int max_iter = 1000;            // outer iterations
  double improvement_floor = 1e-8;  // meters: smaller gains count as no progress
  int patience = 10;              // consecutive no-progress iterations before stall
  int init_sample_budget = 100;   // queries allowed to find an adversarial start
  int success_window = 20;        // orthogonal outcomes kept for the 50% rule
  std::uint64_t rng_seed = 0;

  void validate() const;
};

enum class TerminationReason {
  EpsilonTolerance,  // forward step shrank below tolerance, or distance hit 0
  MaxIter,
  BudgetExhausted,
  Stalled,     // `patience` consecutive iterations without improvement
  InitFailed,  // no adversarial starting point found
};

const char* to_string(TerminationReason reason);

/// Running best distance after the oracle's query-th query.
struct TracePoint {
  int query = 0;
  double distance = 0.0;  // meters, rms
};

struct AttackResult {
  /// Minimum-distance accepted iterate; the original history when the run
  /// never found an adversarial point (success == false, distance 0).
  Trajectory adversarial;
  double final_distance = 0.0;  // trajectory_distance(original, adversarial)
  bool success = false;         // an adversarial iterate was found
  int queries_used = 0;
  std::vector<TracePoint> trace;  // one point after init and per accepted iterate
  TerminationReason termination_reason = TerminationReason::InitFailed;
};

/// Finds an adversarial starting point: first the original itself, then
/// Gaussian samples around it with per-coordinate deviation that escalates
/// every 10 attempts (and cycles after 100, keeping bounded regions
/// reachable). Total queries spent here never exceed init_sample_budget.
/// Throws InitFailedError when the sample budget runs out;
/// BudgetExhaustedError propagates from the oracle.
Trajectory initialize_adversarial(const Scene& scene, DecisionOracle& oracle,
                                  const AttackParams& params, std::mt19937_64& rng);

/// 20-round bisection along the segment from adv toward the original,
/// keeping the adversarial side. Returns the adversarial endpoint of the
/// final bracket; on budget exhaustion, the best adversarial point found.
Trajectory forward_initialize(const Trajectory& original, const Trajectory& adv,
                              DecisionOracle& oracle, const Scene& scene,
                              const AttackParams& params);

/// Distance-preserving exploration move: a Gaussian direction made
/// orthogonal to (original - current), scaled to delta times the current
/// distance, then re-projected onto the sphere around the original through
/// current. Throws NoDirectionError when current == original.
Trajectory orthogonal_step(const Trajectory& original, const Trajectory& current,
                           double delta, std::mt19937_64& rng);

/// Distance-reducing move toward the original: steps epsilon meters (rms),
/// clamped so it never overshoots; an epsilon >= distance lands exactly on
/// the original. Throws NoDirectionError when point == original.
Trajectory forward_step(const Trajectory& original, const Trajectory& point,
                        double epsilon);

/// The full boundary walk: initialization, forward initialization, then
/// alternating orthogonal/forward phases with rejection-driven step decay
/// and the success-window delta adaptation. Returns the best accepted
/// iterate. Initialization failure yields success == false, never a throw.
AttackResult run_attack(const Scene& scene, DecisionOracle& oracle,
                        const AttackParams& params);

}  // namespace dtp
