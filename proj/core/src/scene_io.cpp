#include "dtp/scene_io.hpp"

#include <array>
#include <charconv>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>

#include "dtp/error.hpp"

namespace dtp {
namespace {

struct Row {
  std::string scene_id;
  std::string agent_id;
  long long t = 0;
  Vec2 position{0.0, 0.0};
};

[[noreturn]] void bad_row(std::size_t line, const std::string& what) {
  throw IoError("scene csv line " + std::to_string(line) + ": " + what);
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
}

std::array<std::string, 5> split_fields(const std::string& line, std::size_t lineno) {
  std::array<std::string, 5> fields;
  std::size_t field = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      if (field >= fields.size()) {
        bad_row(lineno, "expected 5 fields");
      }
      fields[field++] = line.substr(start, i - start);
      start = i + 1;
    }
  }
  if (field != fields.size()) {
    bad_row(lineno, "expected 5 fields");
  }
  return fields;
}

long long parse_step(const std::string& text, std::size_t lineno) {
  long long value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    bad_row(lineno, "bad step index '" + text + "'");
  }
  return value;
}

double parse_coord(const std::string& text, std::size_t lineno) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    bad_row(lineno, "bad coordinate '" + text + "'");
  }
  return value;
}

std::string format_coord(double value) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) {
    throw IoError("cannot format coordinate");
  }
  return std::string(buf.data(), ptr);
}

// One agent's samples within one scene group, keyed by step.
using Track = std::map<long long, Vec2>;

bool covers_window(const Track& track, long long t0, std::size_t window) {
  auto it = track.lower_bound(t0);
  for (std::size_t k = 0; k < window; ++k, ++it) {
    if (it == track.end() || it->first != t0 + static_cast<long long>(k)) {
      return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Scene> parse_scenes_csv(std::istream& in, const DatasetStyle& style) {
  const std::size_t window = style.history_len + style.horizon;
  if (window == 0) {
    throw IoError("dataset style has an empty window");
  }

  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) {
    throw IoError("scene csv is empty");
  }
  strip_cr(line);
  if (line != kSceneCsvHeader) {
    throw IoError("scene csv must start with header '" +
                  std::string(kSceneCsvHeader) + "'");
  }

  std::map<std::string, std::map<std::string, Track>> groups;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) {
      continue;
    }
    auto fields = split_fields(line, lineno);
    Row row;
    row.scene_id = fields[0];
    row.agent_id = fields[1];
    if (row.scene_id.empty() || row.agent_id.empty()) {
      bad_row(lineno, "empty scene or agent id");
    }
    row.t = parse_step(fields[2], lineno);
    row.position = Vec2(parse_coord(fields[3], lineno), parse_coord(fields[4], lineno));
    auto [it, inserted] =
        groups[row.scene_id][row.agent_id].emplace(row.t, row.position);
    if (!inserted) {
      bad_row(lineno, "duplicate sample for scene '" + row.scene_id + "' agent '" +
                          row.agent_id + "' step " + std::to_string(row.t));
    }
  }

  std::vector<Scene> scenes;
  for (const auto& [scene_id, agents] : groups) {
    long long t_min = 0;
    long long t_max = 0;
    bool first = true;
    for (const auto& [agent_id, track] : agents) {
      if (first) {
        t_min = track.begin()->first;
        t_max = track.rbegin()->first;
        first = false;
      } else {
        t_min = std::min(t_min, track.begin()->first);
        t_max = std::max(t_max, track.rbegin()->first);
      }
    }
    const long long span = t_max - t_min + 1;
    if (span < static_cast<long long>(window)) {
      continue;
    }
    for (long long t0 = t_min; t0 <= t_max - static_cast<long long>(window) + 1;
         ++t0) {
      Scene scene;
      const AgentId* target = nullptr;
      std::size_t target_track_len = 0;
      for (const auto& [agent_id, track] : agents) {
        if (!covers_window(track, t0, window)) {
          continue;
        }
        Trajectory history;
        history.dt = style.dt;
        Trajectory future;
        future.dt = style.dt;
        for (std::size_t k = 0; k < window; ++k) {
          AgentState state;
          state.position = track.at(t0 + static_cast<long long>(k));
          (k < style.history_len ? history : future).states.push_back(state);
        }
        scene.histories[agent_id] = std::move(history);
        if (!future.empty()) {
          scene.futures[agent_id] = std::move(future);
        }
        // Longest total track wins the target slot; map order breaks ties
        // toward the lexicographically smallest id.
        if (track.size() > target_track_len) {
          target_track_len = track.size();
          target = &agent_id;
        }
      }
      if (target == nullptr) {
        continue;
      }
      scene.target_agent = *target;
      scenes.push_back(std::move(scene));
    }
  }
  if (scenes.empty()) {
    throw IoError("scene csv yields no usable windows");
  }
  return scenes;
}

std::vector<Scene> load_scenes(const std::string& path, const DatasetStyle& style) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read scene csv '" + path + "'");
  }
  return parse_scenes_csv(in, style);
}

void write_scenes_csv(const std::vector<Scene>& scenes, std::ostream& out) {
  out << kSceneCsvHeader << '\n';
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    const std::string scene_id = "s" + std::to_string(i);
    for (const auto& [agent_id, history] : scenes[i].histories) {
      long long t = 0;
      auto emit = [&](const Trajectory& traj) {
        for (const AgentState& state : traj.states) {
          out << scene_id << ',' << agent_id << ',' << t << ','
              << format_coord(state.position.x()) << ','
              << format_coord(state.position.y()) << '\n';
          ++t;
        }
      };
      emit(history);
      auto fut = scenes[i].futures.find(agent_id);
      if (fut != scenes[i].futures.end()) {
        emit(fut->second);
      }
    }
  }
}

void save_scenes(const std::vector<Scene>& scenes, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write scene csv '" + path + "'");
  }
  write_scenes_csv(scenes, out);
  out.flush();
  if (!out) {
    throw IoError("failed writing scene csv '" + path + "'");
  }
}

}  // namespace dtp
