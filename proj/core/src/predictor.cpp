#include "dtp/predictor.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <memory>

#include "dtp/external.hpp"

namespace dtp {

const char* to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::ConstantVelocity:
      return "cv";
    case PredictorKind::ConstantTurn:
      return "ct";
    case PredictorKind::LeastSquares:
      return "lsq";
    case PredictorKind::External:
      return "external";
  }
  return "unknown";
}

std::optional<PredictorKind> parse_predictor_kind(std::string_view name) {
  if (name == "cv") return PredictorKind::ConstantVelocity;
  if (name == "ct") return PredictorKind::ConstantTurn;
  if (name == "lsq") return PredictorKind::LeastSquares;
  if (name == "external") return PredictorKind::External;
  return std::nullopt;
}

PredictorHandle PredictorHandle::constant_velocity() {
  return PredictorHandle{PredictorKind::ConstantVelocity, 1, {}, {}};
}

PredictorHandle PredictorHandle::constant_turn() {
  return PredictorHandle{PredictorKind::ConstantTurn, 1, {}, {}};
}

PredictorHandle PredictorHandle::least_squares(int degree) {
  PredictorHandle h{PredictorKind::LeastSquares, degree, {}, {}};
  h.validate();
  return h;
}

PredictorHandle PredictorHandle::external(std::string endpoint) {
  PredictorHandle h{PredictorKind::External, 1, std::move(endpoint), {}};
  h.validate();
  return h;
}

void PredictorHandle::validate() const {
  if (kind == PredictorKind::LeastSquares && degree != 1 && degree != 2) {
    throw Error("least-squares degree must be 1 or 2");
  }
  if (kind == PredictorKind::External && endpoint.empty()) {
    throw Error("external predictor needs a non-empty endpoint command");
  }
}

std::vector<Vec2> constant_velocity_predict(const Trajectory& history,
                                            std::size_t horizon) {
  if (history.empty()) {
    throw InsufficientHistoryError("constant velocity needs at least one point");
  }
  const Vec2 last = history.position(history.size() - 1);
  Vec2 step(0.0, 0.0);
  if (history.size() >= 2) {
    step = last - history.position(history.size() - 2);
  }
  std::vector<Vec2> out;
  out.reserve(horizon);
  Vec2 p = last;
  for (std::size_t i = 0; i < horizon; ++i) {
    p += step;
    out.push_back(p);
  }
  return out;
}

std::vector<Vec2> constant_turn_predict(const Trajectory& history,
                                        std::size_t horizon) {
  if (history.size() < 3) {
    throw InsufficientHistoryError("constant turn needs at least three points");
  }
  const Vec2 p0 = history.position(history.size() - 3);
  const Vec2 p1 = history.position(history.size() - 2);
  const Vec2 p2 = history.position(history.size() - 1);
  const Vec2 chord_prev = p1 - p0;
  const Vec2 chord_last = p2 - p1;

  // Per-step turn from the heading change between the last two chords.
  // Either chord degenerate means no turn is estimable: fall back to
  // repeating the last chord (stationary if that chord is ~zero too).
  double turn = 0.0;
  if (chord_prev.norm() >= 1e-9 && chord_last.norm() >= 1e-9) {
    turn = std::atan2(chord_last.y(), chord_last.x()) -
           std::atan2(chord_prev.y(), chord_prev.x());
    while (turn > M_PI) turn -= 2.0 * M_PI;
    while (turn < -M_PI) turn += 2.0 * M_PI;
  }

  const double c = std::cos(turn);
  const double s = std::sin(turn);
  std::vector<Vec2> out;
  out.reserve(horizon);
  Vec2 p = p2;
  Vec2 chord = chord_last;
  for (std::size_t i = 0; i < horizon; ++i) {
    chord = Vec2(c * chord.x() - s * chord.y(), s * chord.x() + c * chord.y());
    p += chord;
    out.push_back(p);
  }
  return out;
}

std::vector<Vec2> least_squares_predict(const Trajectory& history,
                                        std::size_t horizon, int degree) {
  if (degree != 1 && degree != 2) {
    throw Error("least-squares degree must be 1 or 2");
  }
  const std::size_t n = history.size();
  if (n < static_cast<std::size_t>(degree) + 1) {
    throw InsufficientHistoryError("least-squares fit needs degree + 1 points");
  }
  const Eigen::Index rows = static_cast<Eigen::Index>(n);
  const Eigen::Index cols = degree + 1;
  Eigen::MatrixXd vander(rows, cols);
  Eigen::MatrixXd rhs(rows, 2);
  for (Eigen::Index i = 0; i < rows; ++i) {
    double v = 1.0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      vander(i, j) = v;
      v *= static_cast<double>(i);
    }
    rhs(i, 0) = history.position(static_cast<std::size_t>(i)).x();
    rhs(i, 1) = history.position(static_cast<std::size_t>(i)).y();
  }
  const Eigen::MatrixXd coef = vander.colPivHouseholderQr().solve(rhs);

  std::vector<Vec2> out;
  out.reserve(horizon);
  for (std::size_t k = 0; k < horizon; ++k) {
    const double t = static_cast<double>(n + k);
    double v = 1.0;
    Vec2 p(0.0, 0.0);
    for (Eigen::Index j = 0; j < cols; ++j) {
      p.x() += coef(j, 0) * v;
      p.y() += coef(j, 1) * v;
      v *= t;
    }
    out.push_back(p);
  }
  return out;
}

namespace {

Prediction reference_predict(const PredictorHandle& handle, const Scene& scene) {
  const std::size_t horizon = scene.horizon();
  Prediction pred;
  for (const auto& [id, history] : scene.histories) {
    switch (handle.kind) {
      case PredictorKind::ConstantVelocity:
        pred.positions[id] = constant_velocity_predict(history, horizon);
        break;
      case PredictorKind::ConstantTurn:
        pred.positions[id] = constant_turn_predict(history, horizon);
        break;
      case PredictorKind::LeastSquares:
        pred.positions[id] = least_squares_predict(history, horizon, handle.degree);
        break;
      case PredictorKind::External:
        throw Error("unreachable: external handled by caller");
    }
  }
  return pred;
}

double external_timeout(const PredictorHandle& handle) {
  auto it = handle.parameters.find("timeout_s");
  return it == handle.parameters.end() ? 30.0 : it->second;
}

}  // namespace

Prediction predict(const PredictorHandle& handle, const Scene& scene) {
  handle.validate();
  if (handle.kind == PredictorKind::External) {
    return external_predict(handle.endpoint, scene, external_timeout(handle));
  }
  return reference_predict(handle, scene);
}

PredictFn make_predictor(const PredictorHandle& handle) {
  handle.validate();
  if (handle.kind == PredictorKind::External) {
    auto client = std::make_shared<ExternalPredictor>(handle.endpoint,
                                                      external_timeout(handle));
    return [client](const Scene& scene) { return client->predict(scene); };
  }
  return [handle](const Scene& scene) { return reference_predict(handle, scene); };
}

}  // namespace dtp
