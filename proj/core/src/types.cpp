#include "dtp/types.hpp"

#include <cmath>

namespace dtp {

void Trajectory::validate() const {
  if (states.empty()) {
    throw Error("trajectory is empty");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error("trajectory dt must be positive and finite");
  }
  for (const AgentState& s : states) {
    if (!std::isfinite(s.position.x()) || !std::isfinite(s.position.y())) {
      throw Error("trajectory contains a non-finite coordinate");
    }
    if (s.heading && !std::isfinite(*s.heading)) {
      throw Error("trajectory contains a non-finite heading");
    }
  }
}

Trajectory make_trajectory(const std::vector<Vec2>& positions, double dt) {
  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(positions.size());
  for (const Vec2& p : positions) {
    traj.states.push_back(AgentState{p, std::nullopt, {}});
  }
  return traj;
}

void LaneContext::validate() const {
  if (!(lane_width > 0.0) || !std::isfinite(lane_width)) {
    throw Error("lane_width must be positive and finite");
  }
  for (const auto& line : centerlines) {
    if (line.empty()) {
      throw Error("lane context contains an empty centerline");
    }
    for (const Vec2& p : line) {
      if (!std::isfinite(p.x()) || !std::isfinite(p.y())) {
        throw Error("lane centerline contains a non-finite coordinate");
      }
    }
  }
}

std::size_t Scene::history_len() const {
  if (histories.empty()) {
    throw Error("scene has no agents");
  }
  return histories.begin()->second.size();
}

std::size_t Scene::horizon() const {
  if (futures.empty()) {
    throw Error("scene has no ground-truth futures");
  }
  return futures.begin()->second.size();
}

const Trajectory& Scene::target_history() const {
  auto it = histories.find(target_agent);
  if (it == histories.end()) {
    throw MissingAgentError("target agent '" + target_agent + "' has no history");
  }
  return it->second;
}

const Trajectory& Scene::target_future() const {
  auto it = futures.find(target_agent);
  if (it == futures.end()) {
    throw MissingAgentError("target agent '" + target_agent + "' has no ground-truth future");
  }
  return it->second;
}

void Scene::validate() const {
  if (histories.empty()) {
    throw Error("scene has no agents");
  }
  if (target_agent.empty()) {
    throw Error("scene has no target agent");
  }
  if (!histories.count(target_agent)) {
    throw MissingAgentError("target agent '" + target_agent + "' has no history");
  }
  const std::size_t li = histories.begin()->second.size();
  for (const auto& [id, traj] : histories) {
    traj.validate();
    if (traj.size() != li) {
      throw LengthMismatchError("history length differs for agent '" + id + "'");
    }
  }
  if (!futures.empty()) {
    const std::size_t lo = futures.begin()->second.size();
    for (const auto& [id, traj] : futures) {
      traj.validate();
      if (traj.size() != lo) {
        throw LengthMismatchError("future length differs for agent '" + id + "'");
      }
      if (!histories.count(id)) {
        throw MissingAgentError("agent '" + id + "' has a future but no history");
      }
    }
  }
  if (context) {
    context->validate();
  }
}

const std::vector<Vec2>& Prediction::for_agent(const AgentId& id) const {
  auto it = positions.find(id);
  if (it == positions.end()) {
    throw MissingAgentError("prediction does not cover agent '" + id + "'");
  }
  return it->second;
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::Left:
      return "left";
    case Direction::Right:
      return "right";
    case Direction::Front:
      return "front";
    case Direction::Rear:
      return "rear";
  }
  return "unknown";
}

std::optional<Direction> parse_direction(std::string_view name) {
  if (name == "left") return Direction::Left;
  if (name == "right") return Direction::Right;
  if (name == "front") return Direction::Front;
  if (name == "rear") return Direction::Rear;
  return std::nullopt;
}

Eigen::VectorXd flatten_positions(const Trajectory& traj) {
  Eigen::VectorXd flat(2 * static_cast<Eigen::Index>(traj.size()));
  for (std::size_t i = 0; i < traj.size(); ++i) {
    flat[2 * static_cast<Eigen::Index>(i)] = traj.states[i].position.x();
    flat[2 * static_cast<Eigen::Index>(i) + 1] = traj.states[i].position.y();
  }
  return flat;
}

Trajectory with_positions(const Trajectory& like, const Eigen::VectorXd& flat) {
  if (flat.size() != 2 * static_cast<Eigen::Index>(like.size())) {
    throw LengthMismatchError("flat vector length does not match trajectory");
  }
  Trajectory out = like;
  for (std::size_t i = 0; i < like.size(); ++i) {
    out.states[i].position.x() = flat[2 * static_cast<Eigen::Index>(i)];
    out.states[i].position.y() = flat[2 * static_cast<Eigen::Index>(i) + 1];
  }
  return out;
}

}  // namespace dtp
