#include "trajevo/data/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace fs = std::filesystem;

namespace trajevo::data {

ColumnOrder ColumnOrder::from_string(const std::string& spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : spec + ",") {
    if (c == ',') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (parts.size() != 4)
    throw Error::config("column order needs 4 comma-separated names: " + spec);
  ColumnOrder order;
  std::set<std::string> seen;
  for (int i = 0; i < 4; ++i) {
    const std::string& name = parts[i];
    if (!seen.insert(name).second)
      throw Error::config("repeated column name: " + name);
    if (name == "frame")
      order.frame = i;
    else if (name == "agent")
      order.agent = i;
    else if (name == "x")
      order.x = i;
    else if (name == "y")
      order.y = i;
    else
      throw Error::config("unknown column name: " + name);
  }
  return order;
}

std::string ColumnOrder::to_string() const {
  std::array<std::string, 4> names;
  names[frame] = "frame";
  names[agent] = "agent";
  names[x] = "x";
  names[y] = "y";
  return names[0] + "," + names[1] + "," + names[2] + "," + names[3];
}

namespace {

bool parse_double(const std::string& token, double& out) {
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + token.size() && !token.empty();
}

// Frame and agent ids arrive as "1" or "1.0" depending on the exporter; both
// must denote an integer.
bool to_integral(double v, std::int64_t& out) {
  if (!std::isfinite(v) || v != std::floor(v)) return false;
  if (v < -9.0e18 || v > 9.0e18) return false;
  out = static_cast<std::int64_t>(v);
  return true;
}

}  // namespace

std::vector<RawTrackRow> parse_track_file(const std::string& path,
                                          const ColumnOrder& order) {
  std::ifstream in(path);
  if (!in) throw Error::io("cannot open track file: " + path);

  std::vector<RawTrackRow> rows;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;

    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string tok;
    while (ss >> tok) fields.push_back(tok);
    if (fields.size() != 4)
      throw Error::malformed_line(path, line_no,
                                  "expected 4 fields, got " +
                                      std::to_string(fields.size()));

    std::array<double, 4> values{};
    for (int i = 0; i < 4; ++i)
      if (!parse_double(fields[i], values[i]))
        throw Error::malformed_line(path, line_no,
                                    "non-numeric field '" + fields[i] + "'");

    RawTrackRow row;
    if (!to_integral(values[order.frame], row.frame_id))
      throw Error::malformed_line(path, line_no, "frame id is not an integer");
    if (!to_integral(values[order.agent], row.agent_id))
      throw Error::malformed_line(path, line_no, "agent id is not an integer");
    row.x = values[order.x];
    row.y = values[order.y];
    if (!std::isfinite(row.x) || !std::isfinite(row.y))
      throw Error(Errc::non_finite_value,
                  path + ":" + std::to_string(line_no) + ": position is not finite");
    rows.push_back(row);
  }
  if (in.bad()) throw Error::io("read failed: " + path);

  std::sort(rows.begin(), rows.end(), [](const RawTrackRow& a, const RawTrackRow& b) {
    return std::tie(a.frame_id, a.agent_id) < std::tie(b.frame_id, b.agent_id);
  });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].frame_id == rows[i - 1].frame_id &&
        rows[i].agent_id == rows[i - 1].agent_id)
      throw Error::duplicate_observation(rows[i].frame_id, rows[i].agent_id);
  return rows;
}

std::vector<TrajectoryWindow> build_windows(const std::vector<RawTrackRow>& rows,
                                            const std::string& scene_id,
                                            std::size_t obs_len,
                                            std::size_t pred_len,
                                            std::size_t stride) {
  std::vector<TrajectoryWindow> windows;
  if (rows.empty() || stride == 0) return windows;
  const std::size_t window_len = obs_len + pred_len;

  // Sorted distinct frame ids; sequence index = position here.
  std::vector<std::int64_t> frames;
  frames.reserve(rows.size());
  for (const RawTrackRow& r : rows) frames.push_back(r.frame_id);
  std::sort(frames.begin(), frames.end());
  frames.erase(std::unique(frames.begin(), frames.end()), frames.end());
  if (frames.size() < window_len) return windows;

  std::unordered_map<std::int64_t, std::size_t> seq_of_frame;
  seq_of_frame.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) seq_of_frame[frames[i]] = i;

  // Per agent: sequence index -> position; per sequence index: agents present.
  std::map<std::int64_t, std::unordered_map<std::size_t, Vec2>> by_agent;
  std::vector<std::vector<std::int64_t>> agents_at(frames.size());
  for (const RawTrackRow& r : rows) {
    const std::size_t seq = seq_of_frame.at(r.frame_id);
    by_agent[r.agent_id].emplace(seq, Vec2{r.x, r.y});
    agents_at[seq].push_back(r.agent_id);
  }

  for (std::size_t start = 0; start + window_len <= frames.size(); start += stride) {
    TrajectoryWindow w;
    w.scene_id = scene_id;
    w.start_frame = frames[start];

    std::vector<std::int64_t> candidates = agents_at[start];
    std::sort(candidates.begin(), candidates.end());
    for (std::int64_t agent : candidates) {
      const auto& positions = by_agent.at(agent);
      Path path;
      path.reserve(window_len);
      bool complete = true;
      for (std::size_t t = 0; t < window_len; ++t) {
        const auto it = positions.find(start + t);
        if (it == positions.end()) {
          complete = false;
          break;
        }
        path.push_back(it->second);
      }
      if (!complete) continue;
      w.agent_ids.push_back(agent);
      w.obs.emplace_back(path.begin(), path.begin() + obs_len);
      w.future.emplace_back(path.begin() + obs_len, path.end());
    }
    if (!w.agent_ids.empty()) windows.push_back(std::move(w));
  }
  return windows;
}

SplitSpec leave_one_out(const std::vector<std::string>& datasets,
                        const std::string& held_out) {
  if (std::find(datasets.begin(), datasets.end(), held_out) == datasets.end())
    throw Error(Errc::unknown_dataset, "'" + held_out + "' is not one of the datasets");
  SplitSpec split;
  split.held_out = held_out;
  for (const std::string& d : datasets)
    if (d != held_out) split.train_sets.push_back(d);
  return split;
}

std::string serialize_window(const TrajectoryWindow& w) {
  std::string out = "WINDOW " + w.scene_id + " " + std::to_string(w.start_frame) +
                    " " + std::to_string(w.num_agents()) + "\n";
  for (std::size_t a = 0; a < w.num_agents(); ++a) {
    for (const Vec2& p : w.obs[a])
      out += fmt_g9(p.x) + " " + fmt_g9(p.y) + "\n";
    for (const Vec2& p : w.future[a])
      out += fmt_g9(p.x) + " " + fmt_g9(p.y) + "\n";
  }
  return out;
}

std::string serialize_windows(const std::vector<TrajectoryWindow>& windows) {
  std::string out;
  for (const TrajectoryWindow& w : windows) out += serialize_window(w);
  return out;
}

Dataset load_dataset_dir(const std::string& root, const std::string& name,
                         const ColumnOrder& order, const std::string& units) {
  const fs::path dir = fs::path(root) / name;
  if (!fs::is_directory(dir))
    throw Error::io("dataset directory not found: " + dir.string());

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".txt")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  Dataset ds;
  ds.name = name;
  ds.units = units;
  for (const fs::path& file : files) {
    Scene scene;
    scene.scene_id = name + "/" + file.stem().string();
    scene.rows = parse_track_file(file.string(), order);
    ds.scenes.push_back(std::move(scene));
  }
  return ds;
}

std::vector<TrajectoryWindow> dataset_windows(const Dataset& ds,
                                              std::size_t obs_len,
                                              std::size_t pred_len,
                                              std::size_t stride) {
  std::vector<TrajectoryWindow> all;
  for (const Scene& scene : ds.scenes) {
    auto ws = build_windows(scene.rows, scene.scene_id, obs_len, pred_len, stride);
    all.insert(all.end(), std::make_move_iterator(ws.begin()),
               std::make_move_iterator(ws.end()));
  }
  return all;
}

}  // namespace trajevo::data
