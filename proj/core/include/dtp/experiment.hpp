#pragma once

#include <cstdint>

#include "dtp/report.hpp"

namespace dtp {

/// Measurement noise applied to runner-generated synthetic scenes, meters.
inline constexpr double kSyntheticJitterSigma = 0.02;

/// Deterministic per-scenario seed stream: a fixed-point mix of the master
/// seed and a salt, so parallel and serial runs draw identical randomness.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt);

/// The synthetic scene scenario `index` runs against: the configured
/// template at a speed drawn uniformly from the synthetic range, with
/// kSyntheticJitterSigma jitter, all derived from (config.seed, index).
/// Throws Error when the config's dataset is not synthetic.
Scene synthetic_scenario(const ExperimentConfig& config, int index);

/// One scenario end to end: the normal prediction and its metrics, the
/// configured attack, then post-attack metrics and the feasibility check.
/// Baseline methods first run the boundary-walk attack on a fresh budget to
/// derive their perturbation ball. Any failure is captured in
/// record.error with zeroed metrics; nothing throws.
struct ScenarioOutcome {
  ScenarioRecord record;
  AttackResult result;
};
ScenarioOutcome run_scenario(const ExperimentConfig& config, const Scene& scene,
                             int index);

/// The full batch: scenario_count scenes (a CSV dataset caps the batch at
/// the windows it yields), per-scenario attacks, aggregates. `threads` <= 0
/// picks the hardware concurrency; any thread count produces the identical
/// report because every scenario derives its randomness from (seed, index)
/// and results are joined by index.
Report run_experiment(const ExperimentConfig& config, int threads = 0);

}  // namespace dtp
