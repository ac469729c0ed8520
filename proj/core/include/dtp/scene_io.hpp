#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dtp/types.hpp"

namespace dtp {

/// Header line every scene CSV starts with.
inline constexpr const char* kSceneCsvHeader = "scene_id,agent_id,t,x,y";

/// Parses scene CSV rows (scene_id,agent_id,t,x,y; t an integer step index,
/// x/y meters, rows in any order) into prediction windows. Windows of
/// length history_len + horizon slide with stride 1 over each scene group's
/// step range; agents covering a window at every step join that window's
/// scene, all others are dropped. The target agent is the included agent
/// with the longest total track, ties broken by lexicographically smallest
/// id. Scenes come out ordered by scene id, then window start. Throws
/// IoError on a malformed header or row, a duplicate (scene, agent, t) key,
/// or when no window yields a scene.
std::vector<Scene> parse_scenes_csv(std::istream& in, const DatasetStyle& style);

/// parse_scenes_csv over a file. Throws IoError when the file cannot be read.
std::vector<Scene> load_scenes(const std::string& path, const DatasetStyle& style);

/// Writes scenes as CSV, one scene id per scene ("s0", "s1", ...), each
/// agent's history and future concatenated over t = 0..len-1. Coordinates
/// use the shortest exact decimal form, so reloading reproduces positions
/// bit for bit. Agents without a future emit history rows only (they will
/// not cover a full window on reload). Lane context and the target choice
/// are not encoded; loading recomputes the target by the longest-track rule.
void write_scenes_csv(const std::vector<Scene>& scenes, std::ostream& out);

/// write_scenes_csv into a file. Throws IoError when the file cannot be
/// written.
void save_scenes(const std::vector<Scene>& scenes, const std::string& path);

}  // namespace dtp
