#include "trajevo/store/runlog.hpp"

#include <filesystem>

#include <json.hpp>

#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace trajevo::store {

using nlohmann::json;

bool is_event_kind(std::string_view kind) {
  for (const char* known : kEventKinds) {
    if (kind == known) return true;
  }
  return false;
}

RunLog RunLog::open(const std::string& path) {
  namespace fs = std::filesystem;
  RunLog log;
  log.path_ = path;

  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }

  if (fs::exists(path)) {
    for (const RunEvent& event : read_run_log(path)) {
      if (event.seq >= log.next_seq_) log.next_seq_ = event.seq + 1;
    }
  }

  log.out_.open(path, std::ios::app | std::ios::binary);
  if (!log.out_) {
    throw Error::io("cannot open run log for append: " + path);
  }
  return log;
}

std::uint64_t RunLog::append(std::string_view kind, const std::string& payload_json) {
  if (!is_event_kind(kind)) {
    throw Error(Errc::config, "unknown event kind: " + std::string(kind));
  }
  json payload = json::parse(payload_json, nullptr, false);
  if (!payload.is_object()) {
    throw Error(Errc::config, "event payload must be a JSON object");
  }

  const std::uint64_t seq = next_seq_++;
  json line;
  line["seq"] = seq;
  line["ts"] = utc_timestamp();
  line["kind"] = std::string(kind);
  line["payload"] = std::move(payload);

  out_ << line.dump() << '\n';
  out_.flush();
  if (!out_) {
    throw Error::io("failed writing run log event to " + path_);
  }
  return seq;
}

std::vector<RunEvent> read_run_log(const std::string& path) {
  std::vector<RunEvent> events;
  const std::string content = read_file(path);
  for (const std::string& line : split_lines(content)) {
    if (line.empty()) continue;
    json parsed = json::parse(line, nullptr, false);
    if (!parsed.is_object() || !parsed.contains("seq") || !parsed.contains("kind")) {
      continue;  // torn tail from an interrupted write
    }
    RunEvent event;
    event.seq = parsed.value("seq", std::uint64_t{0});
    event.ts = parsed.value("ts", std::string{});
    event.kind = parsed.value("kind", std::string{});
    event.payload_json = parsed.contains("payload") ? parsed["payload"].dump() : "{}";
    events.push_back(std::move(event));
  }
  return events;
}

}  // namespace trajevo::store
