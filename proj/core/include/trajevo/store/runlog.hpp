#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace trajevo::store {

// One record of the append-only run log.
struct RunEvent {
  std::uint64_t seq = 0;
  std::string ts;            // UTC timestamp, millisecond resolution
  std::string kind;          // see kEventKinds
  std::string payload_json;  // serialized JSON object, kind-specific fields
};

// The recognized event kinds.
inline constexpr const char* kEventKinds[] = {
    "init",       "llm_request",        "llm_response", "candidate_evaluated",
    "generation_summary", "checkpoint", "export",
};

bool is_event_kind(std::string_view kind);

// Append-only JSON-lines event log.  One writer at a time; every append is
// flushed before returning, so a crash leaves a valid prefix.
class RunLog {
 public:
  // Creates the file (and parent directory) if missing; when the file already
  // has events, appending continues from the last sequence number.
  static RunLog open(const std::string& path);

  // Writes one event line {"seq":..,"ts":..,"kind":..,"payload":{..}} and
  // flushes.  payload_json must be a serialized JSON object.  Returns the
  // assigned sequence number.  Throws Error(Errc::io) on write failure and
  // Error(Errc::config) for an unknown kind or non-object payload.
  std::uint64_t append(std::string_view kind, const std::string& payload_json);

  std::uint64_t next_seq() const { return next_seq_; }
  const std::string& path() const { return path_; }

 private:
  RunLog() = default;

  std::string path_;
  std::ofstream out_;
  std::uint64_t next_seq_ = 1;
};

// Parses every event in a log file.  Throws Error(Errc::io) when the file is
// missing and Error(Errc::corrupt_checkpoint) never — unparseable trailing
// lines (torn writes) are ignored rather than fatal.
std::vector<RunEvent> read_run_log(const std::string& path);

}  // namespace trajevo::store
