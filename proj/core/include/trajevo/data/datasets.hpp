#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trajevo/types.hpp"

namespace trajevo::data {

// One observation: an agent's position at a frame tick.
struct RawTrackRow {
  std::int64_t frame_id = 0;
  std::int64_t agent_id = 0;
  double x = 0.0;
  double y = 0.0;
};

// Which of the four whitespace-separated fields holds what. Raw track files
// in the wild disagree on layout, so the order is configuration, defaulting
// to frame, agent, x, y.
struct ColumnOrder {
  int frame = 0;
  int agent = 1;
  int x = 2;
  int y = 3;

  // Parse e.g. "frame,agent,x,y". Errors: ConfigError.
  static ColumnOrder from_string(const std::string& spec);
  std::string to_string() const;
};

struct SplitSpec {
  std::string held_out;
  std::vector<std::string> train_sets;
};

struct Scene {
  std::string scene_id;
  std::vector<RawTrackRow> rows;
};

struct Dataset {
  std::string name;
  std::string units = "meters";  // label only; values are never converted
  std::vector<Scene> scenes;
};

// Parse one whitespace-separated track file. Rows come back sorted by
// (frame_id, agent_id). Errors: MalformedLine, DuplicateObservation,
// NonFiniteValue, IoError.
std::vector<RawTrackRow> parse_track_file(const std::string& path,
                                          const ColumnOrder& order = {});

// Slice one scene's rows into fixed-length windows. Frames are "consecutive"
// when adjacent in the scene's sorted distinct frame-id sequence, which keeps
// datasets with a fixed frame-id step (e.g. every 10 ticks) intact. A window
// starting at sequence index i (i = 0, stride, 2*stride, ...) contains every
// agent observed at all obs_len+pred_len of those frames; windows with no
// complete agent are not emitted. Output is ordered by start_frame.
std::vector<TrajectoryWindow> build_windows(const std::vector<RawTrackRow>& rows,
                                            const std::string& scene_id,
                                            std::size_t obs_len = kDefaultObsLen,
                                            std::size_t pred_len = kDefaultPredLen,
                                            std::size_t stride = kDefaultObsLen +
                                                                 kDefaultPredLen);

// Hold one set out, train on the rest (input order preserved).
// Errors: UnknownDataset.
SplitSpec leave_one_out(const std::vector<std::string>& datasets,
                        const std::string& held_out);

// Line-oriented window format: header "WINDOW <scene> <start> <A>", then for
// each agent its obs_len+pred_len positions as "x y" lines (nine significant
// digits).
std::string serialize_window(const TrajectoryWindow& w);
std::string serialize_windows(const std::vector<TrajectoryWindow>& windows);

// Load "<root>/<name>/*.txt" (sorted by file name), one scene per file with
// scene_id "<name>/<stem>". Errors: IoError and the parser's errors.
Dataset load_dataset_dir(const std::string& root, const std::string& name,
                         const ColumnOrder& order = {},
                         const std::string& units = "meters");

// All windows of a dataset, scene by scene in load order.
std::vector<TrajectoryWindow> dataset_windows(const Dataset& ds,
                                              std::size_t obs_len = kDefaultObsLen,
                                              std::size_t pred_len = kDefaultPredLen,
                                              std::size_t stride = kDefaultObsLen +
                                                                   kDefaultPredLen);

}  // namespace trajevo::data
