#pragma once

#include <stdexcept>

namespace dtp {

/// Base class of every exception thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Trajectories that must agree in length (or with a required horizon) do not.
class LengthMismatchError : public Error {
public:
  using Error::Error;
};

/// A scene or prediction does not contain the requested agent.
class MissingAgentError : public Error {
public:
  using Error::Error;
};

/// A direction unit vector was requested for a zero-length segment.
class DegenerateHeadingError : public Error {
public:
  using Error::Error;
};

/// Every fallback for a ground-truth direction failed; the truth never moves.
class StationaryTruthError : public Error {
public:
  using Error::Error;
};

/// An error objective selected neither ADE nor FDE, or an objective string
/// could not be parsed.
class InvalidObjectiveError : public Error {
public:
  using Error::Error;
};

/// A predictor needs more history samples than the scene provides.
class InsufficientHistoryError : public Error {
public:
  using Error::Error;
};

/// An oracle query was attempted after the query budget was spent.
class BudgetExhaustedError : public Error {
public:
  using Error::Error;
};

/// No valid perturbation direction could be derived (degenerate geometry).
class NoDirectionError : public Error {
public:
  using Error::Error;
};

/// The adversarial initialization sampler found no adversarial point.
class InitFailedError : public Error {
public:
  using Error::Error;
};

/// A baseline attack was asked to run without a usable perturbation ball.
class NoBoundError : public Error {
public:
  using Error::Error;
};

/// The external predictor subprocess violated the wire protocol
/// (malformed frame, unexpected schema, timeout, or early exit).
class ProtocolError : public Error {
public:
  using Error::Error;
};

/// File, CSV, or JSON input could not be read or parsed.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace dtp
