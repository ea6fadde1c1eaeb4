#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace trajevo {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  double norm() const { return std::hypot(x, y); }
  double norm_sq() const { return x * x + y * y; }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 rotate(Vec2 v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

// Positions of one agent over consecutive frames.
using Path = std::vector<Vec2>;

// One scene slice: per-agent observed history plus ground-truth future.
struct TrajectoryWindow {
  std::string scene_id;
  std::int64_t start_frame = 0;
  std::vector<std::int64_t> agent_ids;
  std::vector<Path> obs;     // [A][T_obs]
  std::vector<Path> future;  // [A][T_pred]

  std::size_t num_agents() const { return agent_ids.size(); }
  std::size_t obs_len() const { return obs.empty() ? 0 : obs.front().size(); }
  std::size_t pred_len() const { return future.empty() ? 0 : future.front().size(); }
};

// K candidate futures for every agent of a window, flat k-major layout.
struct PredictionSet {
  std::size_t num_samples = 0;  // K
  std::size_t num_agents = 0;   // A
  std::size_t horizon = 0;      // T_pred
  std::vector<Vec2> points;     // [K * A * T]

  static PredictionSet zeros(std::size_t k, std::size_t a, std::size_t t) {
    PredictionSet ps;
    ps.num_samples = k;
    ps.num_agents = a;
    ps.horizon = t;
    ps.points.assign(k * a * t, Vec2{});
    return ps;
  }

  Vec2& at(std::size_t k, std::size_t a, std::size_t t) {
    return points[(k * num_agents + a) * horizon + t];
  }
  const Vec2& at(std::size_t k, std::size_t a, std::size_t t) const {
    return points[(k * num_agents + a) * horizon + t];
  }

  Path sample_path(std::size_t k, std::size_t a) const {
    Path p(horizon);
    for (std::size_t t = 0; t < horizon; ++t) p[t] = at(k, a, t);
    return p;
  }

  // All paths of one sample, [A][T].
  std::vector<Path> sample_paths(std::size_t k) const {
    std::vector<Path> out(num_agents);
    for (std::size_t a = 0; a < num_agents; ++a) out[a] = sample_path(k, a);
    return out;
  }

  bool all_finite() const {
    for (const Vec2& p : points)
      if (!p.finite()) return false;
    return true;
  }
};

// Candidate execution outcome, shared between the process runner and the
// evolution loop.
enum class CandidateStatus { untested, ok, crash, timeout, invalid_output };

const char* to_string(CandidateStatus s);
CandidateStatus candidate_status_from_string(const std::string& s);

inline constexpr std::size_t kDefaultSamples = 20;
inline constexpr std::size_t kDefaultObsLen = 8;
inline constexpr std::size_t kDefaultPredLen = 12;

}  // namespace trajevo
