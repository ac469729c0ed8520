#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dtp/error.hpp"
#include "dtp/experiment.hpp"
#include "dtp/plot.hpp"
#include "dtp/report.hpp"
#include "dtp/scene_io.hpp"
#include "dtp/synthetic.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  int budget = 0;
  std::string attack;
  std::string objective;
  std::string out;
};

/// Attaches the shared flag set to a subcommand. Every flag is optional;
/// values only override the config when the flag was actually given.
void add_common_flags(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config_path,
                 "JSON config file (same schema as a report's config key)")
      ->check(CLI::ExistingFile);
  cmd.add_option("--seed", flags.seed, "master seed override");
  cmd.add_option("--budget", flags.budget, "query budget override")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--attack", flags.attack, "attack method override")
      ->check(CLI::IsMember({"dtp", "pso", "simba", "random"}));
  cmd.add_option("--objective", flags.objective, "objective override")
      ->check(CLI::IsMember(
          {"left", "right", "front", "rear", "ade", "fde", "ade+fde"}));
}

/// Config file first, then explicit flag overrides, then validation.
dtp::ExperimentConfig resolve_config(const CLI::App& cmd,
                                     const CommonFlags& flags) {
  dtp::ExperimentConfig config;
  if (cmd.count("--config") > 0) {
    config = dtp::load_config(flags.config_path);
  }
  if (cmd.count("--seed") > 0) {
    config.seed = flags.seed;
  }
  if (cmd.count("--budget") > 0) {
    config.budget = flags.budget;
  }
  if (cmd.count("--attack") > 0) {
    config.attack = *dtp::parse_attack_method(flags.attack);
  }
  if (cmd.count("--objective") > 0) {
    config.objective = *dtp::Objective::parse(flags.objective);
  }
  config.validate();
  return config;
}

/// The scene scenario 0 runs against: the first CSV window or the first
/// synthetic draw.
dtp::Scene first_scene(const dtp::ExperimentConfig& config) {
  if (config.dataset.kind == dtp::DatasetSpec::Kind::Csv) {
    return dtp::load_scenes(config.dataset.path, config.style).front();
  }
  return dtp::synthetic_scenario(config, 0);
}

int run_attack_command(const CLI::App& cmd, const CommonFlags& flags) {
  dtp::ExperimentConfig config = resolve_config(cmd, flags);
  dtp::Scene scene = first_scene(config);
  dtp::ScenarioOutcome outcome = dtp::run_scenario(config, scene, 0);
  const dtp::ScenarioRecord& rec = outcome.record;
  if (!rec.error.empty()) {
    throw dtp::Error("scenario failed: " + rec.error);
  }
  const dtp::AttackResult& result = outcome.result;
  std::cout << "attack: " << dtp::to_string(config.attack) << "\n"
            << "objective: " << config.objective.name() << " (threshold "
            << config.thresholds.active_threshold(config.objective) << ")\n"
            << "success: " << (rec.success ? "yes" : "no") << "\n"
            << "feasible: " << (rec.feasible ? "yes" : "no") << "\n"
            << "queries used: " << rec.queries_used << " / " << config.budget
            << "\n"
            << "final distance: " << rec.final_distance << " m rms\n"
            << "deviation: " << rec.deviation_normal << " -> "
            << rec.deviation_attack << "\n"
            << "termination: " << dtp::to_string(result.termination_reason)
            << "\n";
  if (cmd.count("--out") > 0) {
    std::ofstream out(flags.out);
    if (!out) {
      throw dtp::IoError("cannot open " + flags.out);
    }
    out << dtp::attack_result_to_json(result).dump(2) << "\n";
  }
  return kExitOk;
}

int run_experiment_command(const CLI::App& cmd, const CommonFlags& flags) {
  dtp::ExperimentConfig config = resolve_config(cmd, flags);
  dtp::Report report = dtp::run_experiment(config);
  if (cmd.count("--out") > 0) {
    dtp::save_report(report, flags.out);
    std::cout << "wrote " << flags.out << ": " << report.records.size()
              << " scenarios, asr " << report.aggregates.asr << "\n";
  } else {
    std::cout << dtp::report_to_string(report);
  }
  return kExitOk;
}

int run_plot_command(const CommonFlags& flags, const std::string& input_path) {
  std::ifstream in(input_path);
  if (!in) {
    throw dtp::IoError("cannot open " + input_path);
  }
  dtp::Json j;
  try {
    j = dtp::Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw dtp::IoError(input_path + ": " + e.what());
  }
  std::vector<dtp::TracePoint> trace;
  std::string x_label = "queries";
  std::string y_label = "best distance (m)";
  if (j.contains("trace")) {
    trace = dtp::trace_from_json(j);
  } else if (j.contains("records")) {
    for (const auto& rj : j.at("records")) {
      dtp::ScenarioRecord rec = dtp::record_from_json(rj);
      trace.push_back({rec.index, rec.final_distance});
    }
    x_label = "scenario";
    y_label = "final distance (m)";
  } else {
    throw dtp::IoError(input_path + ": expected a `trace` or `records` key");
  }
  dtp::emit_convergence_plot(trace, flags.out, x_label, y_label);
  std::cout << "wrote " << flags.out << ": " << trace.size() << " points\n";
  return kExitOk;
}

int run_gen_command(const CLI::App& cmd, const CommonFlags& flags) {
  dtp::ExperimentConfig config = resolve_config(cmd, flags);
  if (config.dataset.kind != dtp::DatasetSpec::Kind::Synthetic) {
    throw dtp::Error("gen needs a synthetic dataset template");
  }
  std::vector<dtp::Scene> scenes;
  scenes.reserve(static_cast<std::size_t>(config.scenario_count));
  for (int i = 0; i < config.scenario_count; ++i) {
    scenes.push_back(dtp::synthetic_scenario(config, i));
  }
  dtp::save_scenes(scenes, flags.out);
  std::cout << "wrote " << flags.out << ": " << scenes.size() << " "
            << dtp::to_string(config.dataset.tmpl) << " scenes\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision-based attacks on trajectory prediction"};
  app.require_subcommand(1);

  CommonFlags attack_flags;
  CLI::App* attack_cmd =
      app.add_subcommand("attack", "run one scenario and print the outcome");
  add_common_flags(*attack_cmd, attack_flags);
  attack_cmd->add_option("--out", attack_flags.out,
                         "write the attack result as JSON");

  CommonFlags experiment_flags;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "run a scenario batch into a report");
  add_common_flags(*experiment_cmd, experiment_flags);
  experiment_cmd->add_option("--out", experiment_flags.out,
                             "report path (stdout when absent)");

  CommonFlags plot_flags;
  std::string plot_input;
  CLI::App* plot_cmd =
      app.add_subcommand("plot", "render attack or report JSON as an SVG");
  plot_cmd->add_option("input", plot_input, "attack-result or report JSON")
      ->required()
      ->check(CLI::ExistingFile);
  plot_cmd->add_option("--out", plot_flags.out, "output SVG path")->required();

  CommonFlags gen_flags;
  CLI::App* gen_cmd =
      app.add_subcommand("gen", "generate a synthetic scene CSV");
  add_common_flags(*gen_cmd, gen_flags);
  gen_cmd->add_option("--out", gen_flags.out, "output CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exits 0
  } catch (const CLI::ParseError& e) {
    std::cerr << "dtp: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (attack_cmd->parsed()) {
      return run_attack_command(*attack_cmd, attack_flags);
    }
    if (experiment_cmd->parsed()) {
      return run_experiment_command(*experiment_cmd, experiment_flags);
    }
    if (plot_cmd->parsed()) {
      return run_plot_command(plot_flags, plot_input);
    }
    return run_gen_command(*gen_cmd, gen_flags);
  } catch (const std::exception& e) {
    std::cerr << "dtp: " << e.what() << "\n";
    return kExitRuntime;
  }
}
