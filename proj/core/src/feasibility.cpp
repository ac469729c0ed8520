#include "dtp/feasibility.hpp"

#include <cmath>
#include <cstddef>

#include "dtp/error.hpp"
#include "dtp/metrics.hpp"

namespace dtp {

void KinematicBounds::validate() const {
  if (!(v_max > 0.0) || !(a_max > 0.0) || !(yaw_rate_max > 0.0)) {
    throw Error("kinematic bounds must be positive");
  }
}

bool check_feasibility(const Trajectory& traj, const KinematicBounds& bounds) {
  bounds.validate();
  const std::size_t n = traj.size();
  if (n < 2) {
    return true;
  }
  const double dt = traj.dt;

  double prev_speed = 0.0;
  bool have_prev_speed = false;
  double prev_heading = 0.0;
  std::size_t prev_heading_index = 0;
  bool have_prev_heading = false;

  for (std::size_t i = 0; i + 1 < n; ++i) {
    const Vec2 step = traj.position(i + 1) - traj.position(i);
    const double length = step.norm();
    const double speed = length / dt;
    if (speed > bounds.v_max) {
      return false;
    }
    if (have_prev_speed && std::abs(speed - prev_speed) > bounds.a_max * dt) {
      return false;
    }
    prev_speed = speed;
    have_prev_speed = true;

    if (length < kDegenerateSegmentNorm) {
      continue;  // stationary segment: no heading to check
    }
    const double heading = std::atan2(step.y(), step.x());
    if (have_prev_heading) {
      const double turn = std::remainder(heading - prev_heading, 2.0 * M_PI);
      const double elapsed = dt * static_cast<double>(i - prev_heading_index);
      if (std::abs(turn) > bounds.yaw_rate_max * elapsed) {
        return false;
      }
    }
    prev_heading = heading;
    prev_heading_index = i;
    have_prev_heading = true;
  }
  return true;
}

}  // namespace dtp
