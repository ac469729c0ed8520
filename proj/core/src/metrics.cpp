#include "dtp/metrics.hpp"

#include <cmath>

namespace dtp {
namespace {

// Predicted and ground-truth points for one agent, length-checked.
struct MatchedTracks {
  const std::vector<Vec2>* pred;
  const Trajectory* truth;
};

MatchedTracks match_tracks(const Prediction& pred, const Scene& scene,
                           const AgentId& agent) {
  const std::vector<Vec2>& p = pred.for_agent(agent);
  auto it = scene.futures.find(agent);
  if (it == scene.futures.end()) {
    throw MissingAgentError("no ground-truth future for agent '" + agent + "'");
  }
  if (p.empty()) {
    throw LengthMismatchError("prediction for agent '" + agent + "' is empty");
  }
  if (p.size() != it->second.size()) {
    throw LengthMismatchError("prediction and ground truth disagree in length for agent '" +
                              agent + "'");
  }
  return {&p, &it->second};
}

}  // namespace

double ade(const Prediction& pred, const Scene& scene, const AgentId& agent) {
  const auto [p, truth] = match_tracks(pred, scene, agent);
  double sum = 0.0;
  for (std::size_t i = 0; i < p->size(); ++i) {
    sum += ((*p)[i] - truth->position(i)).norm();
  }
  return sum / static_cast<double>(p->size());
}

double fde(const Prediction& pred, const Scene& scene, const AgentId& agent) {
  const auto [p, truth] = match_tracks(pred, scene, agent);
  const std::size_t last = p->size() - 1;
  return ((*p)[last] - truth->position(last)).norm();
}

Vec2 direction_unit(const Vec2& seg_start, const Vec2& seg_end, Direction dir) {
  const Vec2 seg = seg_end - seg_start;
  const double n = seg.norm();
  if (n < kDegenerateSegmentNorm) {
    throw DegenerateHeadingError("segment too short to define a heading");
  }
  const Vec2 front = seg / n;
  switch (dir) {
    case Direction::Front:
      return front;
    case Direction::Rear:
      return -front;
    case Direction::Left:
      return Vec2(-front.y(), front.x());
    case Direction::Right:
      return Vec2(front.y(), -front.x());
  }
  throw Error("unreachable direction");
}

double intention_deviation(const Prediction& pred, const Scene& scene,
                           const AgentId& agent, Direction dir) {
  const auto [p, truth] = match_tracks(pred, scene, agent);
  const std::size_t horizon = p->size();
  const std::size_t seg_count = horizon - 1;  // future segments s_i -> s_{i+1}

  auto future_segment = [&](std::size_t j) -> Vec2 {
    return truth->position(j + 1) - truth->position(j);
  };

  // Direction axis per horizon step, with the degenerate fallback chain:
  // preceding non-degenerate future segment, then the last history segment.
  auto axis_for_step = [&](std::size_t i) -> Vec2 {
    if (seg_count > 0) {
      const std::size_t j0 = std::min(i, seg_count - 1);
      for (std::size_t j = j0 + 1; j-- > 0;) {
        const Vec2 seg = future_segment(j);
        if (seg.norm() >= kDegenerateSegmentNorm) {
          return direction_unit(truth->position(j), truth->position(j + 1), dir);
        }
      }
    }
    auto hist_it = scene.histories.find(agent);
    if (hist_it != scene.histories.end() && hist_it->second.size() >= 2) {
      const Trajectory& hist = hist_it->second;
      const Vec2& a = hist.position(hist.size() - 2);
      const Vec2& b = hist.position(hist.size() - 1);
      if ((b - a).norm() >= kDegenerateSegmentNorm) {
        return direction_unit(a, b, dir);
      }
    }
    throw StationaryTruthError("ground truth for agent '" + agent +
                               "' never moves; no direction axis exists");
  };

  double sum = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const Vec2 axis = axis_for_step(i);
    sum += ((*p)[i] - truth->position(i)).dot(axis);
  }
  return sum / static_cast<double>(horizon);
}

double combined_error(const Prediction& pred, const Scene& scene,
                      const AgentId& agent, bool use_ade, bool use_fde) {
  if (!use_ade && !use_fde) {
    throw InvalidObjectiveError("error objective must enable ADE, FDE, or both");
  }
  double total = 0.0;
  if (use_ade) {
    total += ade(pred, scene, agent);
  }
  if (use_fde) {
    total += fde(pred, scene, agent);
  }
  return total;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b) {
  if (a.size() != b.size()) {
    throw LengthMismatchError("trajectory_distance needs equal-length trajectories");
  }
  if (a.empty()) {
    throw Error("trajectory_distance on empty trajectories");
  }
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum_sq += (a.position(i) - b.position(i)).squaredNorm();
  }
  return std::sqrt(sum_sq / static_cast<double>(a.size()));
}

}  // namespace dtp
