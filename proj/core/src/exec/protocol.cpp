#include "trajevo/exec/protocol.hpp"

#include <cstdlib>
#include <cstring>

#include "trajevo/util/text.hpp"

namespace trajevo::exec {

const char* to_string(InvalidReason r) {
  switch (r) {
    case InvalidReason::truncated: return "truncated";
    case InvalidReason::wrong_count: return "wrong_count";
    case InvalidReason::non_finite: return "non_finite";
    case InvalidReason::parse_error: return "parse_error";
  }
  return "parse_error";
}

std::string frame_request(const std::vector<TrajectoryWindow>& windows,
                          std::size_t num_samples) {
  std::string out = "TRAJEVO 1 " + std::to_string(windows.size()) + "\n";
  for (const TrajectoryWindow& w : windows) {
    out += "W " + std::to_string(w.num_agents()) + " " +
           std::to_string(w.obs_len()) + " " + std::to_string(w.pred_len()) +
           " " + std::to_string(num_samples) + "\n";
    for (const Path& path : w.obs)
      for (const Vec2& p : path) out += fmt_f9(p.x) + " " + fmt_f9(p.y) + "\n";
  }
  return out;
}

namespace {

// Walks the response line by line without materializing a vector of lines;
// responses can run to hundreds of megabytes under flooding.
class LineCursor {
 public:
  explicit LineCursor(const std::string& text) : text_(text) {}

  // Next non-blank line, or false at end of stream.
  bool next(std::string_view& line) {
    while (pos_ < text_.size()) {
      std::size_t nl = text_.find('\n', pos_);
      if (nl == std::string::npos) nl = text_.size();
      std::string_view candidate(text_.data() + pos_, nl - pos_);
      pos_ = nl + 1;
      while (!candidate.empty() &&
             (candidate.back() == '\r' || candidate.back() == ' ' ||
              candidate.back() == '\t'))
        candidate.remove_suffix(1);
      while (!candidate.empty() &&
             (candidate.front() == ' ' || candidate.front() == '\t'))
        candidate.remove_prefix(1);
      if (!candidate.empty()) {
        line = candidate;
        return true;
      }
    }
    return false;
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

bool parse_point(std::string_view line, double& x, double& y) {
  // Exactly two decimal fields.
  char buf[128];
  if (line.size() >= sizeof(buf)) return false;
  std::memcpy(buf, line.data(), line.size());
  buf[line.size()] = '\0';
  char* end = nullptr;
  x = std::strtod(buf, &end);
  if (end == buf) return false;
  char* end2 = nullptr;
  y = std::strtod(end, &end2);
  if (end2 == end) return false;
  while (*end2 == ' ' || *end2 == '\t') ++end2;
  return *end2 == '\0';
}

ParseResult fail(InvalidReason reason, std::string detail) {
  ParseResult r;
  r.ok = false;
  r.reason = reason;
  r.detail = std::move(detail);
  return r;
}

}  // namespace

ParseResult parse_response(const std::string& text,
                           const std::vector<TrajectoryWindow>& windows,
                           std::size_t num_samples) {
  LineCursor cursor(text);
  ParseResult result;
  result.predictions.reserve(windows.size());

  for (std::size_t wi = 0; wi < windows.size(); ++wi) {
    const TrajectoryWindow& w = windows[wi];
    std::string_view line;
    if (!cursor.next(line))
      return fail(InvalidReason::truncated,
                  "stream ended before block " + std::to_string(wi));
    if (line.size() < 3 || line[0] != 'P' || line[1] != ' ')
      return fail(InvalidReason::parse_error,
                  "expected 'P <agents>' at block " + std::to_string(wi));
    char* end = nullptr;
    const std::string header(line.substr(2));
    const long agents = std::strtol(header.c_str(), &end, 10);
    if (end == header.c_str() || *end != '\0' || agents < 0)
      return fail(InvalidReason::parse_error,
                  "bad agent count at block " + std::to_string(wi));
    if (static_cast<std::size_t>(agents) != w.num_agents())
      return fail(InvalidReason::wrong_count,
                  "block " + std::to_string(wi) + " claims " +
                      std::to_string(agents) + " agents, window has " +
                      std::to_string(w.num_agents()));

    PredictionSet ps = PredictionSet::zeros(num_samples, w.num_agents(), w.pred_len());
    const std::size_t expected = num_samples * w.num_agents() * w.pred_len();
    for (std::size_t i = 0; i < expected; ++i) {
      if (!cursor.next(line))
        return fail(InvalidReason::wrong_count,
                    "block " + std::to_string(wi) + " has " + std::to_string(i) +
                        " of " + std::to_string(expected) + " point lines");
      double x = 0.0, y = 0.0;
      if (!parse_point(line, x, y))
        return fail(InvalidReason::parse_error,
                    "unparseable point line in block " + std::to_string(wi));
      if (!std::isfinite(x) || !std::isfinite(y))
        return fail(InvalidReason::non_finite,
                    "non-finite point in block " + std::to_string(wi));
      ps.points[i] = {x, y};
    }
    result.predictions.push_back(std::move(ps));
  }

  std::string_view trailing;
  if (cursor.next(trailing))
    return fail(InvalidReason::wrong_count, "trailing content after the last block");

  result.ok = true;
  return result;
}

}  // namespace trajevo::exec
