#include "dtp/synthetic.hpp"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dtp/error.hpp"

namespace dtp {
namespace {

// Points reached slower than this are pinned to the nominal path instead of
// jittered: near-stationary segments would otherwise get noise-dominated
// headings and fail the yaw-rate check.
constexpr double kJitterMinSpeed = 1.0;  // m/s

const AgentId kSyntheticAgent = "a0";

}  // namespace

const char* to_string(SceneTemplate tmpl) {
  switch (tmpl) {
    case SceneTemplate::Straight:
      return "straight";
    case SceneTemplate::LeftTurn:
      return "left_turn";
    case SceneTemplate::RightTurn:
      return "right_turn";
    case SceneTemplate::Accelerate:
      return "accelerate";
    case SceneTemplate::Brake:
      return "brake";
  }
  return "straight";
}

std::optional<SceneTemplate> parse_scene_template(std::string_view name) {
  if (name == "straight") return SceneTemplate::Straight;
  if (name == "left_turn") return SceneTemplate::LeftTurn;
  if (name == "right_turn") return SceneTemplate::RightTurn;
  if (name == "accelerate") return SceneTemplate::Accelerate;
  if (name == "brake") return SceneTemplate::Brake;
  return std::nullopt;
}

Scene generate_synthetic_scene(SceneTemplate tmpl, const DatasetStyle& style,
                               double speed, std::uint64_t seed,
                               double jitter_sigma) {
  if (!(speed > 0.0)) {
    throw Error("synthetic scenes need a positive speed");
  }
  double yaw_rate = 0.0;
  double accel = 0.0;
  switch (tmpl) {
    case SceneTemplate::Straight:
      break;
    case SceneTemplate::LeftTurn:
      yaw_rate = kTemplateYawRate;
      break;
    case SceneTemplate::RightTurn:
      yaw_rate = -kTemplateYawRate;
      break;
    case SceneTemplate::Accelerate:
      accel = kTemplateAccel;
      break;
    case SceneTemplate::Brake:
      accel = -kTemplateAccel;
      break;
  }

  const std::size_t total = style.history_len + style.horizon;
  const std::size_t extended = total + style.horizon;  // centerline overshoot
  const double dt = style.dt;

  std::vector<Vec2> nominal;
  nominal.reserve(extended + 1);
  std::vector<double> headings(extended, 0.0);
  std::vector<double> speeds(extended, 0.0);
  Vec2 pos(0.0, 0.0);
  double heading = 0.0;
  double v = speed;
  nominal.push_back(pos);  // start pose anchors the centerline
  for (std::size_t k = 0; k < extended; ++k) {
    heading += yaw_rate * dt;
    v = std::max(0.0, v + accel * dt);
    pos += v * dt * Vec2(std::cos(heading), std::sin(heading));
    nominal.push_back(pos);
    headings[k] = heading;
    speeds[k] = v;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  Trajectory history;
  history.dt = dt;
  Trajectory future;
  future.dt = dt;
  for (std::size_t k = 0; k < total; ++k) {
    AgentState state;
    state.position = nominal[k + 1];
    if (jitter_sigma > 0.0 && speeds[k] >= kJitterMinSpeed) {
      state.position.x() += jitter_sigma * noise(rng);
      state.position.y() += jitter_sigma * noise(rng);
    }
    state.heading = headings[k];
    (k < style.history_len ? history : future).states.push_back(state);
  }

  Scene scene;
  scene.histories[kSyntheticAgent] = std::move(history);
  scene.futures[kSyntheticAgent] = std::move(future);
  scene.target_agent = kSyntheticAgent;
  LaneContext context;
  context.centerlines.push_back(std::move(nominal));
  scene.context = std::move(context);
  return scene;
}

}  // namespace dtp
