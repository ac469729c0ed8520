#pragma once

#include <memory>
#include <string>

#include "dtp/types.hpp"

namespace dtp {

/// Client for an out-of-process predictor speaking dtp-predict/1:
/// newline-delimited JSON over the child's stdin/stdout, one request line
/// per prediction, one response line back.
///
/// Request:  {"schema":"dtp-predict/1","dt":0.5,"horizon":12,"target":"a1",
///            "history":{"a1":[[x,y],...],...},"context":null}
/// Response: {"prediction":{"a1":[[x,y],...],...}}
///
/// The command is run via /bin/sh -c. The child is kept alive across calls
/// and shut down (EOF on stdin, then SIGKILL after a grace period) on
/// destruction. Calls are serialized: one in-flight request per process.
class ExternalPredictor {
public:
  /// Spawns the endpoint process. timeout_s bounds each response wait.
  explicit ExternalPredictor(std::string command, double timeout_s = 30.0);
  ~ExternalPredictor();

  ExternalPredictor(ExternalPredictor&&) noexcept;
  ExternalPredictor& operator=(ExternalPredictor&&) noexcept;
  ExternalPredictor(const ExternalPredictor&) = delete;
  ExternalPredictor& operator=(const ExternalPredictor&) = delete;

  /// One request/response round trip. Throws ProtocolError on transport
  /// failure, malformed or mismatched response, timeout, or child exit.
  Prediction predict(const Scene& scene);

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience: spawn, predict once, shut down.
Prediction external_predict(const std::string& endpoint, const Scene& scene,
                            double timeout_s = 30.0);

}  // namespace dtp
