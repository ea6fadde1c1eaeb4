#include "trajevo/baselines/baselines.hpp"

#include <cmath>

#include "trajevo/error.hpp"

namespace trajevo::baselines {

namespace {

void require_obs(const TrajectoryWindow& w, std::size_t min_frames,
                 const char* model) {
  if (w.num_agents() == 0 || w.obs_len() < min_frames)
    throw Error(Errc::too_short_history,
                std::string(model) + " needs " + std::to_string(min_frames) +
                    " observed frames, got " + std::to_string(w.obs_len()));
}

// Replicate one deterministic per-agent path set across all samples.
PredictionSet replicate(const std::vector<Path>& paths, std::size_t num_samples,
                        std::size_t horizon) {
  PredictionSet ps = PredictionSet::zeros(num_samples, paths.size(), horizon);
  for (std::size_t k = 0; k < num_samples; ++k)
    for (std::size_t a = 0; a < paths.size(); ++a)
      for (std::size_t t = 0; t < horizon; ++t) ps.at(k, a, t) = paths[a][t];
  return ps;
}

Vec2 last_velocity(const TrajectoryWindow& w, std::size_t agent) {
  const Path& obs = w.obs[agent];
  return obs[obs.size() - 1] - obs[obs.size() - 2];
}

Path extrapolate(Vec2 start, Vec2 velocity, std::size_t horizon) {
  Path path(horizon);
  Vec2 p = start;
  for (std::size_t t = 0; t < horizon; ++t) {
    p += velocity;
    path[t] = p;
  }
  return path;
}

}  // namespace

PredictionSet cvm(const TrajectoryWindow& window, std::size_t num_samples) {
  require_obs(window, 2, "cvm");
  std::vector<Path> paths(window.num_agents());
  for (std::size_t a = 0; a < window.num_agents(); ++a)
    paths[a] = extrapolate(window.obs[a].back(), last_velocity(window, a),
                           window.pred_len());
  return replicate(paths, num_samples, window.pred_len());
}

PredictionSet cvm_s(const TrajectoryWindow& window, const BaselineParams& params,
                    Rng& rng, std::size_t num_samples) {
  require_obs(window, 2, "cvm_s");
  const std::size_t A = window.num_agents();
  const std::size_t T = window.pred_len();
  PredictionSet ps = PredictionSet::zeros(num_samples, A, T);
  for (std::size_t k = 0; k < num_samples; ++k) {
    for (std::size_t a = 0; a < A; ++a) {
      Vec2 v = last_velocity(window, a);
      if (k > 0) {
        const double angle = rng.normal(0.0, params.cvm_s_angle_std);
        v = rotate(v, angle);
        if (params.cvm_s_speed_std > 0.0)
          v = v * (1.0 + rng.normal(0.0, params.cvm_s_speed_std));
      }
      const Path path = extrapolate(window.obs[a].back(), v, T);
      for (std::size_t t = 0; t < T; ++t) ps.at(k, a, t) = path[t];
    }
  }
  return ps;
}

PredictionSet constant_acc(const TrajectoryWindow& window,
                           std::size_t num_samples) {
  require_obs(window, 3, "constant_acc");
  const std::size_t T = window.pred_len();
  std::vector<Path> paths(window.num_agents());
  for (std::size_t a = 0; a < window.num_agents(); ++a) {
    const Path& obs = window.obs[a];
    const Vec2 v_last = obs[obs.size() - 1] - obs[obs.size() - 2];
    const Vec2 v_prev = obs[obs.size() - 2] - obs[obs.size() - 3];
    const Vec2 accel = v_last - v_prev;
    Path path(T);
    Vec2 p = obs.back();
    Vec2 v = v_last;
    for (std::size_t t = 0; t < T; ++t) {
      v += accel;
      p += v;
      path[t] = p;
    }
    paths[a] = path;
  }
  return replicate(paths, num_samples, T);
}

PredictionSet ctrv(const TrajectoryWindow& window, std::size_t num_samples) {
  require_obs(window, 3, "ctrv");
  const std::size_t T = window.pred_len();
  std::vector<Path> paths(window.num_agents());
  for (std::size_t a = 0; a < window.num_agents(); ++a) {
    const Path& obs = window.obs[a];
    const Vec2 v_last = obs[obs.size() - 1] - obs[obs.size() - 2];
    const Vec2 v_prev = obs[obs.size() - 2] - obs[obs.size() - 3];
    const double speed = v_last.norm();
    Path path(T);
    Vec2 p = obs.back();
    if (speed == 0.0) {
      for (std::size_t t = 0; t < T; ++t) path[t] = p;
    } else {
      double heading = std::atan2(v_last.y, v_last.x);
      double omega = 0.0;
      if (v_prev.norm() > 0.0) {
        omega = heading - std::atan2(v_prev.y, v_prev.x);
        // wrap to (-pi, pi] so a small turn never becomes a near-full spin
        while (omega > 3.14159265358979323846) omega -= 2.0 * 3.14159265358979323846;
        while (omega <= -3.14159265358979323846) omega += 2.0 * 3.14159265358979323846;
      }
      for (std::size_t t = 0; t < T; ++t) {
        heading += omega;
        p += Vec2{speed * std::cos(heading), speed * std::sin(heading)};
        path[t] = p;
      }
    }
    paths[a] = path;
  }
  return replicate(paths, num_samples, T);
}

PredictionSet linreg(const TrajectoryWindow& window, std::size_t num_samples) {
  require_obs(window, 2, "linreg");
  const std::size_t T = window.pred_len();
  std::vector<Path> paths(window.num_agents());
  for (std::size_t a = 0; a < window.num_agents(); ++a) {
    const Path& obs = window.obs[a];
    const double n = static_cast<double>(obs.size());
    double t_mean = 0.0;
    Vec2 p_mean{};
    for (std::size_t t = 0; t < obs.size(); ++t) {
      t_mean += static_cast<double>(t);
      p_mean += obs[t];
    }
    t_mean /= n;
    p_mean = p_mean * (1.0 / n);
    double s_tt = 0.0;
    Vec2 s_tp{};
    for (std::size_t t = 0; t < obs.size(); ++t) {
      const double dt = static_cast<double>(t) - t_mean;
      s_tt += dt * dt;
      s_tp += (obs[t] - p_mean) * dt;
    }
    const Vec2 slope = s_tt > 0.0 ? s_tp * (1.0 / s_tt) : Vec2{};
    const Vec2 intercept = p_mean - slope * t_mean;
    Path path(T);
    for (std::size_t t = 0; t < T; ++t) {
      const double idx = static_cast<double>(obs.size() + t);
      path[t] = intercept + slope * idx;
    }
    paths[a] = path;
  }
  return replicate(paths, num_samples, T);
}

PredictionSet social_force(const TrajectoryWindow& window,
                           const BaselineParams& params,
                           std::size_t num_samples) {
  require_obs(window, 2, "social_force");
  const std::size_t A = window.num_agents();
  const std::size_t T = window.pred_len();

  std::vector<Vec2> drive(A), pos(A);
  for (std::size_t a = 0; a < A; ++a) {
    drive[a] = last_velocity(window, a);
    pos[a] = window.obs[a].back();
  }

  std::vector<Path> paths(A, Path(T));
  for (std::size_t t = 0; t < T; ++t) {
    std::vector<Vec2> repulsion(A);
    for (std::size_t i = 0; i < A; ++i) {
      for (std::size_t j = 0; j < A; ++j) {
        if (i == j) continue;
        const Vec2 away = pos[i] - pos[j];
        const double distance = away.norm();
        if (distance >= params.sf_interaction_radius) continue;
        repulsion[i] += away * (params.sf_repulsion_strength *
                                std::exp(-distance) / (distance + 1e-6));
      }
    }
    for (std::size_t a = 0; a < A; ++a) {
      pos[a] += drive[a] + repulsion[a];
      paths[a][t] = pos[a];
    }
  }
  return replicate(paths, num_samples, T);
}

const std::vector<std::string>& baseline_names() {
  static const std::vector<std::string> names = {
      "cvm", "cvm_s", "constant_acc", "ctrv", "linreg", "social_force"};
  return names;
}

PredictionSet run_baseline(const std::string& name, const TrajectoryWindow& window,
                           const BaselineParams& params, Rng& rng,
                           std::size_t num_samples) {
  if (name == "cvm") return cvm(window, num_samples);
  if (name == "cvm_s") return cvm_s(window, params, rng, num_samples);
  if (name == "constant_acc") return constant_acc(window, num_samples);
  if (name == "ctrv") return ctrv(window, num_samples);
  if (name == "linreg") return linreg(window, num_samples);
  if (name == "social_force") return social_force(window, params, num_samples);
  throw Error::config("unknown baseline: " + name);
}

}  // namespace trajevo::baselines
