#pragma once

#include "dtp/types.hpp"

namespace dtp {

/// Finite-difference kinematic limits for a physically plausible track.
/// All limits are inclusive.
struct KinematicBounds {
  double v_max = 20.0;        // m/s
  double a_max = 5.0;         // m/s^2, change of segment speed per second
  double yaw_rate_max = 1.0;  // rad/s

  /// Throws Error unless every limit is positive.
  void validate() const;
};

/// Post-hoc physical plausibility of a track:
///   - every segment speed |p[i+1] - p[i]| / dt is at most v_max;
///   - consecutive segment speeds change by at most a_max * dt;
///   - consecutive segment headings turn by at most yaw_rate_max per second
///     of elapsed time between them.
/// Segments shorter than kDegenerateSegmentNorm carry no heading and skip
/// the yaw check; the turn allowance accumulates across them, so a vehicle
/// may reorient while stopped at the bounded rate. Trajectories with fewer
/// than two points are trivially feasible.
bool check_feasibility(const Trajectory& traj, const KinematicBounds& bounds);

}  // namespace dtp
