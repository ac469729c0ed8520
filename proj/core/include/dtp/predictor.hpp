#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dtp/types.hpp"

namespace dtp {

enum class PredictorKind { ConstantVelocity, ConstantTurn, LeastSquares, External };

const char* to_string(PredictorKind kind);
std::optional<PredictorKind> parse_predictor_kind(std::string_view name);

/// Opaque reference to a prediction model. Reference kinds run in-process;
/// External launches `endpoint` as a child process speaking the
/// dtp-predict/1 wire protocol (see external.hpp).
struct PredictorHandle {
  PredictorKind kind = PredictorKind::ConstantVelocity;
  int degree = 1;            // LeastSquares only; 1 or 2
  std::string endpoint;      // External only; shell command line
  std::map<std::string, double> parameters;  // e.g. "timeout_s" for External

  static PredictorHandle constant_velocity();
  static PredictorHandle constant_turn();
  static PredictorHandle least_squares(int degree);
  static PredictorHandle external(std::string endpoint);

  /// Throws Error on invalid degree or an External handle with no endpoint.
  void validate() const;
};

using PredictFn = std::function<Prediction(const Scene&)>;

/// Predicts every agent in the scene over the scene's horizon.
/// Deterministic for non-External kinds. For External handles this spawns a
/// fresh endpoint process per call; use make_predictor() to keep one process
/// alive across repeated queries.
Prediction predict(const PredictorHandle& handle, const Scene& scene);

/// Wraps a handle as a reusable closure. External handles get a persistent
/// child process shared by all copies of the returned function.
PredictFn make_predictor(const PredictorHandle& handle);

/// Linear extrapolation of the last history step. A single-point history
/// (or a stationary last step) predicts the last point repeated.
std::vector<Vec2> constant_velocity_predict(const Trajectory& history,
                                            std::size_t horizon);

/// Arc continuation: turn rate and chord length estimated from the last
/// three points; each future step rotates the previous chord by the
/// estimated per-step turn. Collinear points reduce to constant velocity.
/// Throws InsufficientHistoryError for histories shorter than 3.
std::vector<Vec2> constant_turn_predict(const Trajectory& history,
                                        std::size_t horizon);

/// Polynomial fit of x(t), y(t) over sample indices, evaluated beyond the
/// history. degree must be 1 or 2 and needs degree + 1 history points.
std::vector<Vec2> least_squares_predict(const Trajectory& history,
                                        std::size_t horizon, int degree);

}  // namespace dtp
