#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "dtp/types.hpp"

namespace dtp {

/// Ground-truth motion patterns for desk-scale scenarios.
enum class SceneTemplate { Straight, LeftTurn, RightTurn, Accelerate, Brake };

/// Canonical lowercase names: "straight", "left_turn", "right_turn",
/// "accelerate", "brake".
const char* to_string(SceneTemplate tmpl);
std::optional<SceneTemplate> parse_scene_template(std::string_view name);

/// Template motion constants. Turns hold speed and yaw rate; Accelerate and
/// Brake hold heading and ramp speed (clamped at zero, so a braked vehicle
/// ends stationary). All stay well inside the default KinematicBounds for
/// speeds in the synthetic sampling range.
inline constexpr double kTemplateYawRate = 0.1;  // rad/s, LeftTurn (+) / RightTurn (-)
inline constexpr double kTemplateAccel = 1.0;    // m/s^2, Accelerate (+) / Brake (-)

/// Speeds drawn for synthetic scenarios when none is pinned, m/s.
inline constexpr double kSyntheticSpeedMin = 3.0;
inline constexpr double kSyntheticSpeedMax = 10.0;

/// One-agent scene integrated at style.dt from a pose at the origin facing
/// +x. Each recorded point is the state after one integration step, so N
/// points span N steps of motion and a turn's final heading is
/// yaw_rate * N * dt. The first history_len points form the history, the
/// next horizon points the future; per-state headings are filled in. When
/// jitter_sigma > 0, Gaussian noise of that scale is added to every
/// recorded coordinate (the seed drives it). The scene carries a
/// LaneContext with one centerline along the jitterless path, extended one
/// horizon beyond its end.
/// Throws Error unless speed > 0.
Scene generate_synthetic_scene(SceneTemplate tmpl, const DatasetStyle& style,
                               double speed, std::uint64_t seed,
                               double jitter_sigma = 0.0);

}  // namespace dtp
