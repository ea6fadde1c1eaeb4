#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "trajevo/data/datasets.hpp"
#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

using namespace trajevo;
using namespace trajevo::data;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path.string();
}

// One agent walking (t, 2t) over frames [f0, f0 + n).
void add_walk(std::vector<RawTrackRow>& rows, std::int64_t agent, std::int64_t f0,
              std::int64_t n, std::int64_t frame_step = 1) {
  for (std::int64_t i = 0; i < n; ++i)
    rows.push_back({f0 + i * frame_step, agent, static_cast<double>(i),
                    static_cast<double>(2 * i)});
}

}  // namespace

TEST_CASE("parse_track_file maps fields in the configured order") {
  const auto path = write_temp("tracks_basic.txt", "0 1 3.50 -2.00\n");
  const auto rows = parse_track_file(path);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].frame_id == 0);
  CHECK(rows[0].agent_id == 1);
  CHECK(rows[0].x == doctest::Approx(3.5));
  CHECK(rows[0].y == doctest::Approx(-2.0));

  const auto swapped = parse_track_file(path, ColumnOrder::from_string("agent,frame,y,x"));
  CHECK(swapped[0].frame_id == 1);
  CHECK(swapped[0].agent_id == 0);
  CHECK(swapped[0].x == doctest::Approx(-2.0));
  CHECK(swapped[0].y == doctest::Approx(3.5));
}

TEST_CASE("parse_track_file: empty file, blank lines, float-formatted ids") {
  CHECK(parse_track_file(write_temp("tracks_empty.txt", "")).empty());
  const auto rows = parse_track_file(
      write_temp("tracks_blank.txt", "\n10.0 2.0 1.5 2.5\n   \n"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].frame_id == 10);
  CHECK(rows[0].agent_id == 2);
}

TEST_CASE("parse_track_file sorts by (frame, agent)") {
  const auto rows = parse_track_file(write_temp(
      "tracks_sort.txt", "2 1 0 0\n0 2 0 0\n0 1 0 0\n1 1 0 0\n"));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].frame_id == 0);
  CHECK(rows[0].agent_id == 1);
  CHECK(rows[1].frame_id == 0);
  CHECK(rows[1].agent_id == 2);
  CHECK(rows[2].frame_id == 1);
  CHECK(rows[3].frame_id == 2);
}

TEST_CASE("parse_track_file rejects bad input") {
  auto code_of = [](const std::string& name, const std::string& content) {
    try {
      parse_track_file(write_temp(name, content));
      return Errc::internal;
    } catch (const Error& e) {
      return e.code();
    }
  };
  CHECK(code_of("bad_count.txt", "0 1 2\n") == Errc::malformed_line);
  CHECK(code_of("bad_token.txt", "0 1 2 abc\n") == Errc::malformed_line);
  CHECK(code_of("bad_frame.txt", "0.5 1 2 3\n") == Errc::malformed_line);
  CHECK(code_of("bad_nan.txt", "0 1 3.5 NaN\n") == Errc::non_finite_value);
  CHECK(code_of("bad_inf.txt", "0 1 inf 0\n") == Errc::non_finite_value);
  CHECK(code_of("bad_dup.txt", "0 1 1 1\n0 1 2 2\n") == Errc::duplicate_observation);
}

TEST_CASE("build_windows: one agent across exactly 20 frames") {
  std::vector<RawTrackRow> rows;
  add_walk(rows, 7, 0, 20);
  const auto windows = build_windows(rows, "s", 8, 12, 20);
  REQUIRE(windows.size() == 1);
  const auto& w = windows[0];
  CHECK(w.scene_id == "s");
  CHECK(w.start_frame == 0);
  REQUIRE(w.num_agents() == 1);
  CHECK(w.agent_ids[0] == 7);
  REQUIRE(w.obs[0].size() == 8);
  REQUIRE(w.future[0].size() == 12);
  CHECK(w.obs[0][3].x == doctest::Approx(3.0));
  CHECK(w.future[0][0].x == doctest::Approx(8.0));
  CHECK(w.future[0][11].y == doctest::Approx(38.0));
}

TEST_CASE("build_windows: 19 frames is not enough") {
  std::vector<RawTrackRow> rows;
  add_walk(rows, 1, 0, 19);
  CHECK(build_windows(rows, "s", 8, 12, 1).empty());
}

TEST_CASE("build_windows: overlapping agents never share a window") {
  std::vector<RawTrackRow> rows;
  add_walk(rows, 1, 0, 20);
  add_walk(rows, 2, 5, 20);
  const auto windows = build_windows(rows, "s", 8, 12, 1);
  REQUIRE(windows.size() == 2);
  CHECK(windows[0].start_frame == 0);
  REQUIRE(windows[0].num_agents() == 1);
  CHECK(windows[0].agent_ids[0] == 1);
  CHECK(windows[1].start_frame == 5);
  REQUIRE(windows[1].num_agents() == 1);
  CHECK(windows[1].agent_ids[0] == 2);
}

TEST_CASE("build_windows walks the distinct frame sequence, not raw ticks") {
  std::vector<RawTrackRow> rows;
  add_walk(rows, 3, 0, 25, 10);  // frames 0, 10, ..., 240
  const auto windows = build_windows(rows, "s", 8, 12, 20);
  REQUIRE(windows.size() == 1);
  CHECK(windows[0].start_frame == 0);
  CHECK(windows[0].num_agents() == 1);

  const auto dense = build_windows(rows, "s", 8, 12, 1);
  REQUIRE(dense.size() == 6);  // starts at sequence indices 0..5
  CHECK(dense[1].start_frame == 10);
  CHECK(dense[5].start_frame == 50);
}

TEST_CASE("build_windows: non-overlapping stride partitions frames") {
  std::vector<RawTrackRow> rows;
  add_walk(rows, 1, 0, 60);
  const auto windows = build_windows(rows, "s", 8, 12, 20);
  REQUIRE(windows.size() == 3);
  CHECK(windows[0].start_frame == 0);
  CHECK(windows[1].start_frame == 20);
  CHECK(windows[2].start_frame == 40);
}

TEST_CASE("build_windows groups multiple complete agents, sorted by id") {
  std::vector<RawTrackRow> rows;
  add_walk(rows, 9, 0, 20);
  add_walk(rows, 2, 0, 20);
  add_walk(rows, 5, 0, 10);  // incomplete
  const auto windows = build_windows(rows, "s", 8, 12, 20);
  REQUIRE(windows.size() == 1);
  REQUIRE(windows[0].num_agents() == 2);
  CHECK(windows[0].agent_ids == std::vector<std::int64_t>{2, 9});
}

TEST_CASE("window serialization is deterministic and line-oriented") {
  std::vector<RawTrackRow> rows;
  add_walk(rows, 4, 0, 20);
  const auto windows = build_windows(rows, "scene7", 8, 12, 20);
  REQUIRE(windows.size() == 1);
  const std::string text = serialize_window(windows[0]);
  CHECK(text == serialize_window(windows[0]));
  const auto lines = split_lines(text);
  REQUIRE(lines.size() == 1 + 20);
  CHECK(lines[0] == "WINDOW scene7 0 1");
  CHECK(lines[1] == "0 0");
  CHECK(lines[20] == "19 38");
}

TEST_CASE("leave_one_out splits by name") {
  const std::vector<std::string> five = {"eth", "hotel", "univ", "zara1", "zara2"};
  const auto split = leave_one_out(five, "eth");
  CHECK(split.held_out == "eth");
  CHECK(split.train_sets == std::vector<std::string>{"hotel", "univ", "zara1", "zara2"});

  const auto two = leave_one_out({"a", "b"}, "b");
  CHECK(two.train_sets == std::vector<std::string>{"a"});

  CHECK_THROWS_AS(leave_one_out({"a"}, "b"), Error);
  try {
    leave_one_out({"a"}, "b");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unknown_dataset);
  }
}
