#pragma once

// Reference implementations used to cross-check the library. Everything here
// is written with plain scalar loops and no library types on purpose: these
// are the values the real implementations must reproduce, not wrappers
// around them.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace refimpl {

struct Pt {
  double x = 0.0;
  double y = 0.0;
};

inline double dist(const Pt& a, const Pt& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline double ade(const std::vector<Pt>& pred, const std::vector<Pt>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("ade oracle: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    sum += dist(pred[i], truth[i]);
  }
  return sum / static_cast<double>(pred.size());
}

inline double fde(const std::vector<Pt>& pred, const std::vector<Pt>& truth) {
  if (pred.size() != truth.size() || pred.empty()) {
    throw std::invalid_argument("fde oracle: length mismatch");
  }
  return dist(pred.back(), truth.back());
}

inline double rms_displacement(const std::vector<Pt>& a, const std::vector<Pt>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("rms oracle: length mismatch");
  }
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dx = a[i].x - b[i].x;
    const double dy = a[i].y - b[i].y;
    sum_sq += dx * dx + dy * dy;
  }
  return std::sqrt(sum_sq / static_cast<double>(a.size()));
}

// Unit axis for a named direction relative to the segment a -> b.
// Returns false when the segment is degenerate (norm < 1e-9).
inline bool direction_axis(const Pt& a, const Pt& b, const std::string& dir,
                           Pt& out) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double n = std::sqrt(dx * dx + dy * dy);
  if (n < 1e-9) {
    return false;
  }
  const double fx = dx / n;
  const double fy = dy / n;
  if (dir == "front") {
    out = {fx, fy};
  } else if (dir == "rear") {
    out = {-fx, -fy};
  } else if (dir == "left") {
    out = {-fy, fx};
  } else if (dir == "right") {
    out = {fy, -fx};
  } else {
    throw std::invalid_argument("direction oracle: unknown direction");
  }
  return true;
}

// Mean signed projection of the prediction error onto the ground-truth
// motion axis. Mirrors the documented fallback chain: per-step segment with
// the final step reusing the last segment, then the nearest preceding
// non-degenerate segment, then the last history segment.
inline double intention_deviation(const std::vector<Pt>& pred,
                                  const std::vector<Pt>& future,
                                  const std::vector<Pt>& history,
                                  const std::string& dir) {
  if (pred.size() != future.size() || pred.empty()) {
    throw std::invalid_argument("intention oracle: length mismatch");
  }
  const std::size_t horizon = pred.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    Pt axis;
    bool found = false;
    if (future.size() >= 2) {
      std::size_t j = std::min(i, future.size() - 2);
      while (true) {
        if (direction_axis(future[j], future[j + 1], dir, axis)) {
          found = true;
          break;
        }
        if (j == 0) break;
        --j;
      }
    }
    if (!found && history.size() >= 2) {
      found = direction_axis(history[history.size() - 2], history.back(), dir, axis);
    }
    if (!found) {
      throw std::runtime_error("intention oracle: stationary truth");
    }
    const double ex = pred[i].x - future[i].x;
    const double ey = pred[i].y - future[i].y;
    sum += ex * axis.x + ey * axis.y;
  }
  return sum / static_cast<double>(horizon);
}

// Closed-form simple linear regression of x(t) and y(t) over t = 0..n-1,
// evaluated at t = n..n+horizon-1.
inline std::vector<Pt> line_fit_predict(const std::vector<Pt>& hist,
                                        std::size_t horizon) {
  const std::size_t n = hist.size();
  if (n < 2) {
    throw std::invalid_argument("line fit oracle: need two points");
  }
  const double nn = static_cast<double>(n);
  const double t_bar = (nn - 1.0) / 2.0;
  double x_bar = 0.0, y_bar = 0.0;
  for (const Pt& p : hist) {
    x_bar += p.x;
    y_bar += p.y;
  }
  x_bar /= nn;
  y_bar /= nn;
  double stt = 0.0, stx = 0.0, sty = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) - t_bar;
    stt += dt * dt;
    stx += dt * (hist[i].x - x_bar);
    sty += dt * (hist[i].y - y_bar);
  }
  const double slope_x = stx / stt;
  const double slope_y = sty / stt;
  std::vector<Pt> out;
  for (std::size_t k = 0; k < horizon; ++k) {
    const double t = static_cast<double>(n + k);
    out.push_back({x_bar + slope_x * (t - t_bar), y_bar + slope_y * (t - t_bar)});
  }
  return out;
}

// Distance from q to the segment a -> b.
inline double point_segment_distance(const Pt& q, const Pt& a, const Pt& b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len_sq = abx * abx + aby * aby;
  if (len_sq == 0.0) {
    return dist(q, a);
  }
  double t = ((q.x - a.x) * abx + (q.y - a.y) * aby) / len_sq;
  if (t < 0.0) t = 0.0;
  if (t > 1.0) t = 1.0;
  const Pt proj{a.x + t * abx, a.y + t * aby};
  return dist(q, proj);
}

inline double min_polyline_distance(const Pt& q,
                                    const std::vector<std::vector<Pt>>& lines) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& line : lines) {
    if (line.size() == 1) {
      best = std::min(best, dist(q, line[0]));
      continue;
    }
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
      best = std::min(best, point_segment_distance(q, line[i], line[i + 1]));
    }
  }
  return best;
}

// Finite-difference kinematics check mirroring the documented rules:
// speeds from consecutive points, accelerations from consecutive speeds,
// heading change between consecutive non-stationary segments.
inline bool feasible(const std::vector<Pt>& traj, double dt, double v_max,
                     double a_max, double yaw_rate_max) {
  if (traj.size() < 2) {
    return true;
  }
  std::vector<double> speeds;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    speeds.push_back(dist(traj[i], traj[i + 1]) / dt);
  }
  for (double v : speeds) {
    if (v > v_max) return false;
  }
  for (std::size_t i = 0; i + 1 < speeds.size(); ++i) {
    if (std::abs(speeds[i + 1] - speeds[i]) / dt > a_max) return false;
  }
  double prev_heading = 0.0;
  bool have_prev = false;
  for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
    const double dx = traj[i + 1].x - traj[i].x;
    const double dy = traj[i + 1].y - traj[i].y;
    if (std::sqrt(dx * dx + dy * dy) < 1e-9) {
      continue;  // stationary segment: no heading
    }
    const double heading = std::atan2(dy, dx);
    if (have_prev) {
      double diff = heading - prev_heading;
      while (diff > M_PI) diff -= 2.0 * M_PI;
      while (diff < -M_PI) diff += 2.0 * M_PI;
      if (std::abs(diff) > yaw_rate_max * dt) return false;
    }
    prev_heading = heading;
    have_prev = true;
  }
  return true;
}

}  // namespace refimpl
