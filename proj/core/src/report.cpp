#include "dtp/report.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <limits>
#include <sstream>

#include "dtp/error.hpp"

namespace dtp {
namespace {

[[noreturn]] void bad_input(const std::string& what) { throw IoError(what); }

const Json& require_key(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    bad_input(std::string("missing key '") + key + "'");
  }
  return *it;
}

std::optional<double> optional_from(const Json& j, const char* key) {
  const Json& v = require_key(j, key);
  if (v.is_null()) {
    return std::nullopt;
  }
  return v.get<double>();
}

Json to_json(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

const char* to_string(AttackMethod method) {
  switch (method) {
    case AttackMethod::Dtp:
      return "dtp";
    case AttackMethod::Pso:
      return "pso";
    case AttackMethod::Simba:
      return "simba";
    case AttackMethod::Random:
      return "random";
  }
  return "dtp";
}

std::optional<AttackMethod> parse_attack_method(std::string_view name) {
  if (name == "dtp") return AttackMethod::Dtp;
  if (name == "pso") return AttackMethod::Pso;
  if (name == "simba") return AttackMethod::Simba;
  if (name == "random") return AttackMethod::Random;
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (scenario_count < 1) {
    throw Error("scenario_count must be at least 1");
  }
  if (budget < 1) {
    throw Error("budget must be at least 1");
  }
  if (!(miss_threshold > 0.0)) {
    throw Error("miss_threshold must be positive");
  }
  if (style.history_len < 1 || style.horizon < 1 || !(style.dt > 0.0)) {
    throw Error("dataset style needs history, horizon, and a positive dt");
  }
  if (dataset.kind == DatasetSpec::Kind::Csv && dataset.path.empty()) {
    throw Error("csv dataset needs a path");
  }
  predictor.validate();
  thresholds.validate();
  bounds.validate();
}

double attack_success_rate(const std::vector<ScenarioRecord>& records) {
  if (records.empty()) {
    throw Error("attack success rate needs at least one record");
  }
  std::size_t hits = 0;
  for (const ScenarioRecord& r : records) {
    if (r.success && r.feasible) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double miss_rate(const std::vector<ScenarioRecord>& records, double threshold,
                 bool attacked) {
  if (records.empty()) {
    throw Error("miss rate needs at least one record");
  }
  if (!(threshold > 0.0)) {
    throw Error("miss threshold must be positive");
  }
  std::size_t misses = 0;
  for (const ScenarioRecord& r : records) {
    if ((attacked ? r.fde_attack : r.fde_normal) > threshold) {
      ++misses;
    }
  }
  return static_cast<double>(misses) / static_cast<double>(records.size());
}

double polyline_distance(const Vec2& point, const std::vector<Vec2>& polyline) {
  if (polyline.empty()) {
    throw Error("polyline distance needs at least one vertex");
  }
  if (polyline.size() == 1) {
    return (point - polyline.front()).norm();
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    const Vec2& a = polyline[i];
    const Vec2 ab = polyline[i + 1] - a;
    const double len2 = ab.squaredNorm();
    double t = 0.0;
    if (len2 > 0.0) {
      t = std::clamp((point - a).dot(ab) / len2, 0.0, 1.0);
    }
    best = std::min(best, (point - (a + t * ab)).norm());
  }
  return best;
}

double off_road_rate(const Prediction& pred, const LaneContext& context,
                     const AgentId& agent) {
  context.validate();
  if (context.centerlines.empty()) {
    throw Error("off-road rate needs at least one centerline");
  }
  const std::vector<Vec2>& points = pred.for_agent(agent);
  if (points.empty()) {
    return 0.0;
  }
  const double half_width = context.lane_width / 2.0;
  std::size_t off = 0;
  for (const Vec2& p : points) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& line : context.centerlines) {
      nearest = std::min(nearest, polyline_distance(p, line));
    }
    if (nearest > half_width) {
      ++off;
    }
  }
  return static_cast<double>(off) / static_cast<double>(points.size());
}

Aggregates compute_aggregates(const std::vector<ScenarioRecord>& records,
                              double miss_threshold) {
  Aggregates agg;
  agg.asr = attack_success_rate(records);
  agg.mr_normal = miss_rate(records, miss_threshold, false);
  agg.mr_attack = miss_rate(records, miss_threshold, true);

  const double total = static_cast<double>(records.size());
  std::size_t successes = 0;
  std::size_t valid = 0;
  std::size_t orr_normal_count = 0;
  std::size_t orr_attack_count = 0;
  double perturbation_sum = 0.0;
  double ade_normal_sum = 0.0;
  double ade_attack_sum = 0.0;
  double fde_normal_sum = 0.0;
  double fde_attack_sum = 0.0;
  double orr_normal_sum = 0.0;
  double orr_attack_sum = 0.0;
  for (const ScenarioRecord& r : records) {
    if (r.success) {
      ++successes;
      perturbation_sum += r.final_distance;
    }
    if (!r.error.empty()) {
      continue;
    }
    ++valid;
    ade_normal_sum += r.ade_normal;
    ade_attack_sum += r.ade_attack;
    fde_normal_sum += r.fde_normal;
    fde_attack_sum += r.fde_attack;
    if (r.orr_normal) {
      ++orr_normal_count;
      orr_normal_sum += *r.orr_normal;
    }
    if (r.orr_attack) {
      ++orr_attack_count;
      orr_attack_sum += *r.orr_attack;
    }
  }
  agg.criterion_rate = static_cast<double>(successes) / total;
  if (successes > 0) {
    agg.mean_perturbation = perturbation_sum / static_cast<double>(successes);
  }
  if (valid > 0) {
    const double n = static_cast<double>(valid);
    agg.ade_normal_mean = ade_normal_sum / n;
    agg.ade_attack_mean = ade_attack_sum / n;
    agg.fde_normal_mean = fde_normal_sum / n;
    agg.fde_attack_mean = fde_attack_sum / n;
  }
  if (orr_normal_count > 0) {
    agg.orr_normal_mean = orr_normal_sum / static_cast<double>(orr_normal_count);
  }
  if (orr_attack_count > 0) {
    agg.orr_attack_mean = orr_attack_sum / static_cast<double>(orr_attack_count);
  }
  if (agg.ade_normal_mean > 0.0) {
    agg.ade_amplification = agg.ade_attack_mean / agg.ade_normal_mean;
  }
  if (agg.fde_normal_mean > 0.0) {
    agg.fde_amplification = agg.fde_attack_mean / agg.fde_normal_mean;
  }
  return agg;
}

Json to_json(const ExperimentConfig& config) {
  Json dataset;
  if (config.dataset.kind == DatasetSpec::Kind::Synthetic) {
    dataset = Json{{"kind", "synthetic"}, {"template", to_string(config.dataset.tmpl)}};
  } else {
    dataset = Json{{"kind", "csv"}, {"path", config.dataset.path}};
  }

  Json style;
  const DatasetStyle& s = config.style;
  const DatasetStyle nu = DatasetStyle::nuscenes_like();
  const DatasetStyle ap = DatasetStyle::apollo_like();
  if (s.history_len == nu.history_len && s.horizon == nu.horizon && s.dt == nu.dt) {
    style = "nuscenes";
  } else if (s.history_len == ap.history_len && s.horizon == ap.horizon &&
             s.dt == ap.dt) {
    style = "apollo";
  } else {
    style = Json{{"history_len", s.history_len}, {"horizon", s.horizon}, {"dt", s.dt}};
  }

  Json predictor;
  predictor["kind"] = to_string(config.predictor.kind);
  if (config.predictor.kind == PredictorKind::LeastSquares) {
    predictor["degree"] = config.predictor.degree;
  }
  if (config.predictor.kind == PredictorKind::External) {
    predictor["endpoint"] = config.predictor.endpoint;
    if (!config.predictor.parameters.empty()) {
      predictor["parameters"] = config.predictor.parameters;
    }
  }

  return Json{
      {"dataset", dataset},
      {"style", style},
      {"predictor", predictor},
      {"objective", config.objective.name()},
      {"thresholds",
       Json{{"int_lateral", config.thresholds.int_lateral},
            {"int_longitudinal", config.thresholds.int_longitudinal},
            {"ade", config.thresholds.ade},
            {"fde", config.thresholds.fde}}},
      {"attack", to_string(config.attack)},
      {"budget", config.budget},
      {"scenario_count", config.scenario_count},
      {"miss_threshold", config.miss_threshold},
      {"bounds",
       Json{{"v_max", config.bounds.v_max},
            {"a_max", config.bounds.a_max},
            {"yaw_rate_max", config.bounds.yaw_rate_max}}},
      {"seed", config.seed},
  };
}

ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig config;
  try {
    if (j.contains("dataset")) {
      const Json& d = j.at("dataset");
      const std::string kind = d.value("kind", "synthetic");
      if (kind == "synthetic") {
        config.dataset.kind = DatasetSpec::Kind::Synthetic;
        const std::string name = d.value("template", "straight");
        auto tmpl = parse_scene_template(name);
        if (!tmpl) {
          bad_input("config: unknown scene template '" + name + "'");
        }
        config.dataset.tmpl = *tmpl;
      } else if (kind == "csv") {
        config.dataset.kind = DatasetSpec::Kind::Csv;
        config.dataset.path = d.value("path", "");
      } else {
        bad_input("config: unknown dataset kind '" + kind + "'");
      }
    }
    if (j.contains("style")) {
      const Json& s = j.at("style");
      if (s.is_string()) {
        const std::string name = s.get<std::string>();
        if (name == "nuscenes") {
          config.style = DatasetStyle::nuscenes_like();
        } else if (name == "apollo") {
          config.style = DatasetStyle::apollo_like();
        } else {
          bad_input("config: unknown style '" + name + "'");
        }
      } else {
        config.style.history_len = s.value("history_len", config.style.history_len);
        config.style.horizon = s.value("horizon", config.style.horizon);
        config.style.dt = s.value("dt", config.style.dt);
      }
    }
    if (j.contains("predictor")) {
      const Json& p = j.at("predictor");
      const std::string kind = p.value("kind", "cv");
      auto parsed = parse_predictor_kind(kind);
      if (!parsed) {
        bad_input("config: unknown predictor kind '" + kind + "'");
      }
      config.predictor.kind = *parsed;
      config.predictor.degree = p.value("degree", 1);
      config.predictor.endpoint = p.value("endpoint", "");
      if (p.contains("parameters")) {
        config.predictor.parameters =
            p.at("parameters").get<std::map<std::string, double>>();
      }
    }
    if (j.contains("objective")) {
      const std::string name = j.at("objective").get<std::string>();
      auto objective = Objective::parse(name);
      if (!objective) {
        bad_input("config: unknown objective '" + name + "'");
      }
      config.objective = *objective;
    }
    if (j.contains("thresholds")) {
      const Json& t = j.at("thresholds");
      config.thresholds.int_lateral =
          t.value("int_lateral", config.thresholds.int_lateral);
      config.thresholds.int_longitudinal =
          t.value("int_longitudinal", config.thresholds.int_longitudinal);
      config.thresholds.ade = t.value("ade", config.thresholds.ade);
      config.thresholds.fde = t.value("fde", config.thresholds.fde);
    }
    if (j.contains("attack")) {
      const std::string name = j.at("attack").get<std::string>();
      auto method = parse_attack_method(name);
      if (!method) {
        bad_input("config: unknown attack '" + name + "'");
      }
      config.attack = *method;
    }
    config.budget = j.value("budget", config.budget);
    config.scenario_count = j.value("scenario_count", config.scenario_count);
    config.miss_threshold = j.value("miss_threshold", config.miss_threshold);
    if (j.contains("bounds")) {
      const Json& b = j.at("bounds");
      config.bounds.v_max = b.value("v_max", config.bounds.v_max);
      config.bounds.a_max = b.value("a_max", config.bounds.a_max);
      config.bounds.yaw_rate_max =
          b.value("yaw_rate_max", config.bounds.yaw_rate_max);
    }
    config.seed = j.value("seed", config.seed);
  } catch (const Json::exception& e) {
    bad_input(std::string("config: ") + e.what());
  }
  return config;
}

Json to_json(const ScenarioRecord& r) {
  return Json{
      {"index", r.index},
      {"success", r.success},
      {"feasible", r.feasible},
      {"final_distance", r.final_distance},
      {"queries_used", r.queries_used},
      {"ade_normal", r.ade_normal},
      {"ade_attack", r.ade_attack},
      {"fde_normal", r.fde_normal},
      {"fde_attack", r.fde_attack},
      {"deviation_normal", r.deviation_normal},
      {"deviation_attack", r.deviation_attack},
      {"orr_normal", to_json(r.orr_normal)},
      {"orr_attack", to_json(r.orr_attack)},
      {"error", r.error},
  };
}

ScenarioRecord record_from_json(const Json& j) {
  ScenarioRecord r;
  try {
    r.index = require_key(j, "index").get<int>();
    r.success = require_key(j, "success").get<bool>();
    r.feasible = require_key(j, "feasible").get<bool>();
    r.final_distance = require_key(j, "final_distance").get<double>();
    r.queries_used = require_key(j, "queries_used").get<int>();
    r.ade_normal = require_key(j, "ade_normal").get<double>();
    r.ade_attack = require_key(j, "ade_attack").get<double>();
    r.fde_normal = require_key(j, "fde_normal").get<double>();
    r.fde_attack = require_key(j, "fde_attack").get<double>();
    r.deviation_normal = require_key(j, "deviation_normal").get<double>();
    r.deviation_attack = require_key(j, "deviation_attack").get<double>();
    r.orr_normal = optional_from(j, "orr_normal");
    r.orr_attack = optional_from(j, "orr_attack");
    r.error = require_key(j, "error").get<std::string>();
  } catch (const Json::exception& e) {
    bad_input(std::string("record: ") + e.what());
  }
  return r;
}

Json to_json(const Aggregates& a) {
  return Json{
      {"asr", a.asr},
      {"criterion_rate", a.criterion_rate},
      {"ade_normal_mean", a.ade_normal_mean},
      {"ade_attack_mean", a.ade_attack_mean},
      {"fde_normal_mean", a.fde_normal_mean},
      {"fde_attack_mean", a.fde_attack_mean},
      {"mr_normal", a.mr_normal},
      {"mr_attack", a.mr_attack},
      {"orr_normal_mean", to_json(a.orr_normal_mean)},
      {"orr_attack_mean", to_json(a.orr_attack_mean)},
      {"mean_perturbation", a.mean_perturbation},
      {"ade_amplification", to_json(a.ade_amplification)},
      {"fde_amplification", to_json(a.fde_amplification)},
  };
}

Aggregates aggregates_from_json(const Json& j) {
  Aggregates a;
  try {
    a.asr = require_key(j, "asr").get<double>();
    a.criterion_rate = require_key(j, "criterion_rate").get<double>();
    a.ade_normal_mean = require_key(j, "ade_normal_mean").get<double>();
    a.ade_attack_mean = require_key(j, "ade_attack_mean").get<double>();
    a.fde_normal_mean = require_key(j, "fde_normal_mean").get<double>();
    a.fde_attack_mean = require_key(j, "fde_attack_mean").get<double>();
    a.mr_normal = require_key(j, "mr_normal").get<double>();
    a.mr_attack = require_key(j, "mr_attack").get<double>();
    a.orr_normal_mean = optional_from(j, "orr_normal_mean");
    a.orr_attack_mean = optional_from(j, "orr_attack_mean");
    a.mean_perturbation = require_key(j, "mean_perturbation").get<double>();
    a.ade_amplification = optional_from(j, "ade_amplification");
    a.fde_amplification = optional_from(j, "fde_amplification");
  } catch (const Json::exception& e) {
    bad_input(std::string("aggregates: ") + e.what());
  }
  return a;
}

Json to_json(const Report& report) {
  Json records = Json::array();
  for (const ScenarioRecord& r : report.records) {
    records.push_back(to_json(r));
  }
  return Json{
      {"config", to_json(report.config)},
      {"seed", report.seed},
      {"records", records},
      {"aggregates", to_json(report.aggregates)},
  };
}

Report report_from_json(const Json& j) {
  Report report;
  try {
    report.config = config_from_json(require_key(j, "config"));
    report.seed = require_key(j, "seed").get<std::uint64_t>();
    const Json& records = require_key(j, "records");
    if (!records.is_array() || records.empty()) {
      bad_input("report has no records");
    }
    for (const Json& r : records) {
      report.records.push_back(record_from_json(r));
    }
    report.aggregates = aggregates_from_json(require_key(j, "aggregates"));
  } catch (const Json::exception& e) {
    bad_input(std::string("report: ") + e.what());
  }
  const Aggregates recomputed =
      compute_aggregates(report.records, report.config.miss_threshold);
  if (!(recomputed == report.aggregates)) {
    bad_input("report aggregates do not match its records");
  }
  return report;
}

std::string report_to_string(const Report& report) {
  return to_json(report).dump(2) + "\n";
}

void save_report(const Report& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write report '" + path + "'");
  }
  out << report_to_string(report);
  out.flush();
  if (!out) {
    throw IoError("failed writing report '" + path + "'");
  }
}

Report load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read report '" + path + "'");
  }
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    bad_input("report '" + path + "': " + e.what());
  }
  return report_from_json(j);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read config '" + path + "'");
  }
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    bad_input("config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

Json attack_result_to_json(const AttackResult& result) {
  Json trace = Json::array();
  for (const TracePoint& p : result.trace) {
    trace.push_back(Json{{"query", p.query}, {"distance", p.distance}});
  }
  Json points = Json::array();
  for (const AgentState& s : result.adversarial.states) {
    points.push_back(Json::array({s.position.x(), s.position.y()}));
  }
  return Json{
      {"success", result.success},
      {"final_distance", result.final_distance},
      {"queries_used", result.queries_used},
      {"termination_reason", to_string(result.termination_reason)},
      {"trace", trace},
      {"adversarial", Json{{"dt", result.adversarial.dt}, {"points", points}}},
  };
}

std::vector<TracePoint> trace_from_json(const Json& j) {
  std::vector<TracePoint> trace;
  try {
    const Json& arr = require_key(j, "trace");
    if (!arr.is_array()) {
      bad_input("trace must be an array");
    }
    for (const Json& p : arr) {
      TracePoint point;
      point.query = require_key(p, "query").get<int>();
      point.distance = require_key(p, "distance").get<double>();
      trace.push_back(point);
    }
  } catch (const Json::exception& e) {
    bad_input(std::string("trace: ") + e.what());
  }
  return trace;
}

}  // namespace dtp
