// Minimal out-of-process predictor used by the external-protocol tests.
// Speaks dtp-predict/1 over stdin/stdout: one JSON request per line, one
// JSON response per line. Predicts every agent stationary at its last
// observed position.

#include <nlohmann/json.hpp>

#include <iostream>
#include <string>

#include <thread>

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "";
  // --broken emits a malformed frame; --short answers one point short of the
  // requested horizon; --hang never answers; --die exits immediately.
  const bool broken = mode == "--broken";
  const bool short_horizon = mode == "--short";
  const bool hang = mode == "--hang";
  if (mode == "--die") {
    return 3;
  }

  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) {
      continue;
    }
    if (hang) {
      std::this_thread::sleep_for(std::chrono::seconds(3600));
    }
    if (broken) {
      std::cout << "this is not json\n" << std::flush;
      continue;
    }
    nlohmann::json request;
    try {
      request = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      std::cout << nlohmann::json{{"error", "unparseable request"}}.dump() << "\n"
                << std::flush;
      continue;
    }
    if (request.value("schema", "") != "dtp-predict/1") {
      std::cout << nlohmann::json{{"error", "unknown schema"}}.dump() << "\n"
                << std::flush;
      continue;
    }
    auto horizon = request.at("horizon").get<std::size_t>();
    if (short_horizon && horizon > 0) {
      --horizon;
    }
    nlohmann::json prediction = nlohmann::json::object();
    for (const auto& [agent, track] : request.at("history").items()) {
      const auto& last = track.back();
      nlohmann::json points = nlohmann::json::array();
      for (std::size_t i = 0; i < horizon; ++i) {
        points.push_back(last);
      }
      prediction[agent] = points;
    }
    std::cout << nlohmann::json{{"prediction", prediction}}.dump() << "\n"
              << std::flush;
  }
  return 0;
}
