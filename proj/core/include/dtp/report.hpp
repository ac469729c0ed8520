#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dtp/attack.hpp"
#include "dtp/criteria.hpp"
#include "dtp/feasibility.hpp"
#include "dtp/predictor.hpp"
#include "dtp/synthetic.hpp"
#include "dtp/types.hpp"

namespace dtp {

/// Key order is part of the report's byte format, so everything serializes
/// through the order-preserving json type.
using Json = nlohmann::ordered_json;

enum class AttackMethod { Dtp, Pso, Simba, Random };

/// Canonical names: "dtp", "pso", "simba", "random".
const char* to_string(AttackMethod method);
std::optional<AttackMethod> parse_attack_method(std::string_view name);

/// Where scenario scenes come from: a synthetic template or a CSV file.
struct DatasetSpec {
  enum class Kind { Synthetic, Csv };

  Kind kind = Kind::Synthetic;
  SceneTemplate tmpl = SceneTemplate::Straight;  // Synthetic only
  std::string path;                              // Csv only
};

/// Everything one experiment run depends on. Serialized as the `config` key
/// of the report; config files use the same schema and absent fields keep
/// these defaults.
struct ExperimentConfig {
  DatasetSpec dataset;
  DatasetStyle style = DatasetStyle::nuscenes_like();
  PredictorHandle predictor = PredictorHandle::constant_velocity();
  Objective objective = Objective::error(true, false);
  ThresholdConfig thresholds;
  AttackMethod attack = AttackMethod::Dtp;
  int budget = 1000;
  int scenario_count = 100;
  double miss_threshold = 2.0;  // meters; FDE above this is a miss
  KinematicBounds bounds;
  std::uint64_t seed = 0;

  /// Throws Error unless scenario_count >= 1, budget >= 1,
  /// miss_threshold > 0, and the nested configs validate.
  void validate() const;
};

/// One scenario's outcome. `success` means the attack produced a
/// criterion-satisfying trajectory; `feasible` applies the kinematic bounds
/// to the returned trajectory. `deviation_*` hold the objective's raw
/// activation value before and after the attack. The `orr_*` rates are
/// absent when the scene carries no lane context. A non-empty `error` marks
/// a scenario that failed to run: its metrics are zero, it counts toward
/// every rate's denominator, and it is excluded from the metric means.
struct ScenarioRecord {
  int index = 0;
  bool success = false;
  bool feasible = false;
  double final_distance = 0.0;  // meters, rms perturbation
  int queries_used = 0;
  double ade_normal = 0.0;
  double ade_attack = 0.0;
  double fde_normal = 0.0;
  double fde_attack = 0.0;
  double deviation_normal = 0.0;
  double deviation_attack = 0.0;
  std::optional<double> orr_normal;
  std::optional<double> orr_attack;
  std::string error;

  bool operator==(const ScenarioRecord&) const = default;
};

/// Experiment-level summary. Every field is recomputable from the records;
/// loading a report verifies that exactly. Amplification ratios are absent
/// when the normal-side mean is zero; off-road means are absent when no
/// record carries a rate.
struct Aggregates {
  double asr = 0.0;             // success && feasible
  double criterion_rate = 0.0;  // success regardless of feasibility
  double ade_normal_mean = 0.0;
  double ade_attack_mean = 0.0;
  double fde_normal_mean = 0.0;
  double fde_attack_mean = 0.0;
  double mr_normal = 0.0;
  double mr_attack = 0.0;
  std::optional<double> orr_normal_mean;
  std::optional<double> orr_attack_mean;
  double mean_perturbation = 0.0;  // mean final_distance over successes
  std::optional<double> ade_amplification;  // attack mean / normal mean
  std::optional<double> fde_amplification;

  bool operator==(const Aggregates&) const = default;
};

struct Report {
  ExperimentConfig config;
  std::uint64_t seed = 0;  // echoes config.seed
  std::vector<ScenarioRecord> records;
  Aggregates aggregates;
};

/// Fraction of records that satisfied the criterion with a kinematically
/// feasible trajectory. Throws Error on empty input.
double attack_success_rate(const std::vector<ScenarioRecord>& records);

/// Fraction of records whose FDE strictly exceeds the threshold, reading
/// the post-attack FDE by default. Throws Error on empty input or a
/// non-positive threshold.
double miss_rate(const std::vector<ScenarioRecord>& records, double threshold,
                 bool attacked = true);

/// Distance from a point to a polyline: minimum over its segments, the
/// point itself for a single-vertex polyline.
double polyline_distance(const Vec2& point, const std::vector<Vec2>& polyline);

/// Fraction of the agent's predicted points farther than lane_width / 2
/// from every centerline. Throws on an invalid context or missing agent;
/// an empty prediction is fully on-road.
double off_road_rate(const Prediction& pred, const LaneContext& context,
                     const AgentId& agent);

/// Recomputes every aggregate from the records (see Aggregates for the
/// exclusion rules). Throws Error on empty input.
Aggregates compute_aggregates(const std::vector<ScenarioRecord>& records,
                              double miss_threshold);

Json to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const Json& j);
Json to_json(const ScenarioRecord& record);
ScenarioRecord record_from_json(const Json& j);
Json to_json(const Aggregates& aggregates);
Aggregates aggregates_from_json(const Json& j);

/// Report JSON with top-level keys `config`, `seed`, `records`, `aggregates`.
Json to_json(const Report& report);

/// Parses a report and verifies that recomputing the aggregates from its
/// records reproduces the stored values exactly; throws IoError when they
/// disagree.
Report report_from_json(const Json& j);

/// to_json(report).dump(2) plus a trailing newline: the canonical byte form.
std::string report_to_string(const Report& report);

void save_report(const Report& report, const std::string& path);
Report load_report(const std::string& path);

/// Reads a config file (same schema as the report's `config` key).
ExperimentConfig load_config(const std::string& path);

/// Attack outcome as JSON: success, final_distance, queries_used,
/// termination_reason, and the trace; the plot pipeline consumes this.
Json attack_result_to_json(const AttackResult& result);

/// Extracts the trace array from attack-result JSON.
std::vector<TracePoint> trace_from_json(const Json& j);

}  // namespace dtp
