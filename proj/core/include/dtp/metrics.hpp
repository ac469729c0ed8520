#pragma once

#include "dtp/types.hpp"

namespace dtp {

/// Norm below which a segment is considered degenerate (no usable heading).
inline constexpr double kDegenerateSegmentNorm = 1e-9;

/// Average Displacement Error: mean L2 distance between predicted and
/// ground-truth positions over the horizon.
double ade(const Prediction& pred, const Scene& scene, const AgentId& agent);

/// Final Displacement Error: L2 distance at the last horizon step.
double fde(const Prediction& pred, const Scene& scene, const AgentId& agent);

/// Unit vector for an attack direction relative to the segment
/// seg_start -> seg_end. Front follows the segment, Rear opposes it, Left is
/// +90 degrees CCW, Right is -90 degrees. Throws DegenerateHeadingError when
/// the segment is shorter than kDegenerateSegmentNorm.
Vec2 direction_unit(const Vec2& seg_start, const Vec2& seg_end, Direction dir);

/// Directional intention deviation: mean over the horizon of the prediction
/// error projected onto the ground-truth motion axis for `dir`. The result
/// carries sign, so deviation(Left) == -deviation(Right) on the same inputs.
///
/// Direction per step i comes from the ground-truth segment s_i -> s_{i+1};
/// the final step reuses the last available segment. A degenerate segment
/// falls back to the nearest preceding non-degenerate one, then to the last
/// history segment, and otherwise raises StationaryTruthError.
double intention_deviation(const Prediction& pred, const Scene& scene,
                           const AgentId& agent, Direction dir);

/// Indicator-weighted prediction error: use_ade * ADE + use_fde * FDE.
/// Throws InvalidObjectiveError when both indicators are false.
double combined_error(const Prediction& pred, const Scene& scene,
                      const AgentId& agent, bool use_ade, bool use_fde);

/// Root-mean-square per-timestep displacement between two equal-length
/// trajectories: sqrt((1/L) * sum_i |a_i - b_i|^2). This is the perturbation
/// magnitude the attack minimizes, in meters.
double trajectory_distance(const Trajectory& a, const Trajectory& b);

}  // namespace dtp
