#include "dtp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>
#include <vector>

#include "dtp/attack.hpp"
#include "dtp/baselines.hpp"
#include "dtp/error.hpp"
#include "dtp/feasibility.hpp"
#include "dtp/metrics.hpp"
#include "dtp/scene_io.hpp"
#include "dtp/synthetic.hpp"

namespace dtp {
namespace {

// Salt lanes per scenario: speed, scene jitter, attack, ball pre-run.
enum : std::uint64_t { kSpeedLane = 0, kSceneLane = 1, kAttackLane = 2, kBallLane = 3 };

std::uint64_t scenario_salt(int index, std::uint64_t lane) {
  return 4ull * static_cast<std::uint64_t>(index) + lane;
}

AttackResult dispatch_attack(const ExperimentConfig& config, const Scene& scene,
                             const PredictFn& predictor, int index) {
  const std::uint64_t attack_seed =
      derive_seed(config.seed, scenario_salt(index, kAttackLane));
  if (config.attack == AttackMethod::Dtp) {
    QueryOracle oracle(predictor, config.objective, config.thresholds,
                       config.budget);
    AttackParams params;
    params.rng_seed = attack_seed;
    return run_attack(scene, oracle, params);
  }

  // Baselines search inside a norm ball sized by a reference boundary-walk
  // run on its own budget.
  QueryOracle reference_oracle(predictor, config.objective, config.thresholds,
                               config.budget);
  AttackParams reference_params;
  reference_params.rng_seed =
      derive_seed(config.seed, scenario_salt(index, kBallLane));
  const AttackResult reference =
      run_attack(scene, reference_oracle, reference_params);
  const NormBall ball = derive_ball(reference, scene.target_history());

  if (config.attack == AttackMethod::Random) {
    QueryOracle oracle(predictor, config.objective, config.thresholds,
                       config.budget);
    return random_attack(scene, oracle, ball, attack_seed);
  }
  PredictorScoreOracle oracle(predictor, config.objective, config.thresholds,
                              config.budget);
  if (config.attack == AttackMethod::Pso) {
    PsoParams params;
    params.rng_seed = attack_seed;
    return pso_attack(scene, oracle, ball, params);
  }
  return simba_attack(scene, oracle, ball, ball.radius / 4.0, attack_seed);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

Scene synthetic_scenario(const ExperimentConfig& config, int index) {
  if (config.dataset.kind != DatasetSpec::Kind::Synthetic) {
    throw Error("scenario generation needs a synthetic dataset");
  }
  std::mt19937_64 rng(derive_seed(config.seed, scenario_salt(index, kSpeedLane)));
  std::uniform_real_distribution<double> speed(kSyntheticSpeedMin,
                                               kSyntheticSpeedMax);
  return generate_synthetic_scene(
      config.dataset.tmpl, config.style, speed(rng),
      derive_seed(config.seed, scenario_salt(index, kSceneLane)),
      kSyntheticJitterSigma);
}

ScenarioOutcome run_scenario(const ExperimentConfig& config, const Scene& scene,
                             int index) {
  ScenarioOutcome out;
  out.record.index = index;
  try {
    const PredictFn predictor = make_predictor(config.predictor);
    const AgentId& agent = scene.target_agent;

    const Prediction normal = predictor(scene);
    out.record.ade_normal = ade(normal, scene, agent);
    out.record.fde_normal = fde(normal, scene, agent);
    out.record.deviation_normal = config.objective.value(normal, scene, agent);
    if (scene.context) {
      out.record.orr_normal = off_road_rate(normal, *scene.context, agent);
    }

    out.result = dispatch_attack(config, scene, predictor, index);
    out.record.success = out.result.success;
    out.record.final_distance = out.result.final_distance;
    out.record.queries_used = out.result.queries_used;
    out.record.feasible = check_feasibility(out.result.adversarial, config.bounds);

    const Prediction attacked =
        predictor(with_target_history(scene, out.result.adversarial));
    out.record.ade_attack = ade(attacked, scene, agent);
    out.record.fde_attack = fde(attacked, scene, agent);
    out.record.deviation_attack = config.objective.value(attacked, scene, agent);
    if (scene.context) {
      out.record.orr_attack = off_road_rate(attacked, *scene.context, agent);
    }
  } catch (const std::exception& e) {
    out = ScenarioOutcome{};
    out.record.index = index;
    out.record.error = e.what();
  }
  return out;
}

Report run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();

  std::vector<Scene> csv_scenes;
  int count = config.scenario_count;
  if (config.dataset.kind == DatasetSpec::Kind::Csv) {
    csv_scenes = load_scenes(config.dataset.path, config.style);
    count = std::min<int>(count, static_cast<int>(csv_scenes.size()));
  }

  std::vector<ScenarioRecord> records(count);
  auto run_one = [&](int i) {
    try {
      const Scene scene = config.dataset.kind == DatasetSpec::Kind::Csv
                              ? csv_scenes[static_cast<std::size_t>(i)]
                              : synthetic_scenario(config, i);
      records[static_cast<std::size_t>(i)] = run_scenario(config, scene, i).record;
    } catch (const std::exception& e) {
      ScenarioRecord failed;
      failed.index = i;
      failed.error = e.what();
      records[static_cast<std::size_t>(i)] = failed;
    }
  };

  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) {
      run_one(i);
    }
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          run_one(i);
        }
      });
    }
    for (std::thread& worker : pool) {
      worker.join();
    }
  }

  Report report;
  report.config = config;
  report.seed = config.seed;
  report.records = std::move(records);
  report.aggregates = compute_aggregates(report.records, config.miss_threshold);
  return report;
}

}  // namespace dtp
