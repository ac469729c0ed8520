#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtp/error.hpp"

namespace dtp {

using Vec2 = Eigen::Vector2d;
using AgentId = std::string;

/// One observed sample of one agent. Position is mandatory; everything else
/// is optional metadata that predictors may ignore.
struct AgentState {
  Vec2 position{0.0, 0.0};
  std::optional<double> heading;         // radians, CCW from +x
  std::map<std::string, double> extras;  // e.g. speed, class id, footprint
};

/// A uniformly sampled 2D track. `dt` is the spacing between samples in
/// seconds and must be positive.
struct Trajectory {
  std::vector<AgentState> states;
  double dt = 0.5;

  std::size_t size() const noexcept { return states.size(); }
  bool empty() const noexcept { return states.empty(); }
  const Vec2& position(std::size_t i) const { return states.at(i).position; }
  Vec2& position(std::size_t i) { return states.at(i).position; }

  /// Throws Error if the trajectory is empty, dt <= 0, or any coordinate
  /// is non-finite.
  void validate() const;
};

/// Builds a plain trajectory (positions only) from a list of points.
Trajectory make_trajectory(const std::vector<Vec2>& positions, double dt = 0.5);

/// Optional map knowledge: lane centerlines and a shared width. A predicted
/// point further than lane_width / 2 from every centerline is off-road.
struct LaneContext {
  std::vector<std::vector<Vec2>> centerlines;
  double lane_width = 4.0;

  void validate() const;
};

/// One prediction problem: per-agent observed histories, per-agent ground
/// truth futures, and the agent under attack. All histories share one length
/// L_I and all futures share one length L_O.
struct Scene {
  std::map<AgentId, Trajectory> histories;
  std::map<AgentId, Trajectory> futures;
  AgentId target_agent;
  std::optional<LaneContext> context;

  std::size_t agent_count() const noexcept { return histories.size(); }
  std::size_t history_len() const;  // L_I
  std::size_t horizon() const;      // L_O

  const Trajectory& target_history() const;
  const Trajectory& target_future() const;

  /// Throws on empty scenes, missing target, per-map length disagreement,
  /// or agents present in futures but not histories.
  void validate() const;
};

/// Predictor output: L_O future positions per agent.
struct Prediction {
  std::map<AgentId, std::vector<Vec2>> positions;

  const std::vector<Vec2>& for_agent(const AgentId& id) const;
};

/// Lateral/longitudinal attack directions, relative to ground-truth motion.
enum class Direction { Left, Right, Front, Rear };

const char* to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view name);

/// Dataset sampling conventions. Both presets run at 2 Hz.
struct DatasetStyle {
  std::size_t history_len = 4;  // L_I
  std::size_t horizon = 12;     // L_O
  double dt = 0.5;              // seconds

  static DatasetStyle nuscenes_like() { return {4, 12, 0.5}; }
  static DatasetStyle apollo_like() { return {6, 6, 0.5}; }
};

/// Copies a trajectory's positions into [x0, y0, x1, y1, ...].
Eigen::VectorXd flatten_positions(const Trajectory& traj);

/// Rebuilds a trajectory shaped like `like` with positions taken from a
/// flat [x0, y0, ...] vector. Headings and extras are preserved.
Trajectory with_positions(const Trajectory& like, const Eigen::VectorXd& flat);

}  // namespace dtp
