#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajevo/rng.hpp"
#include "trajevo/types.hpp"

namespace trajevo::baselines {

struct BaselineParams {
  double cvm_s_angle_std = 25.0 * 3.14159265358979323846 / 180.0;  // radians
  double cvm_s_speed_std = 0.0;        // fractional speed noise; 0 disables
  double sf_repulsion_strength = 1.0;  // dimensionless
  double sf_interaction_radius = 2.0;  // same units as positions
  std::uint64_t rng_seed = 0;
};

// Constant Velocity Model: extrapolate the last observed per-frame velocity.
// All samples identical. Errors: TooShortHistory (needs 2 observed frames).
PredictionSet cvm(const TrajectoryWindow& window,
                  std::size_t num_samples = kDefaultSamples);

// Sampling variant: sample 0 is pure CVM; every other sample rotates each
// agent's velocity by an angle drawn from N(0, angle_std^2) (plus optional
// fractional speed noise), one draw per sample per agent.
PredictionSet cvm_s(const TrajectoryWindow& window, const BaselineParams& params,
                    Rng& rng, std::size_t num_samples = kDefaultSamples);

// Constant acceleration: v grows by the last observed velocity difference
// each step. Errors: TooShortHistory (needs 3 frames).
PredictionSet constant_acc(const TrajectoryWindow& window,
                           std::size_t num_samples = kDefaultSamples);

// Constant turn rate and velocity: last speed held, heading advanced by the
// last observed heading change every step. Zero-speed agents stay put.
// Errors: TooShortHistory (needs 3 frames).
PredictionSet ctrv(const TrajectoryWindow& window,
                   std::size_t num_samples = kDefaultSamples);

// Per-agent, per-coordinate ordinary least squares of position against frame
// index over the observed frames, extrapolated over the horizon.
// Errors: TooShortHistory (needs 2 frames).
PredictionSet linreg(const TrajectoryWindow& window,
                     std::size_t num_samples = kDefaultSamples);

// Constant-velocity drive plus pairwise repulsion between simulated agents:
// for neighbors closer than the interaction radius, each step adds
// (direction / (distance + 1e-6)) * strength * exp(-distance) to the step
// velocity, direction pointing away from the neighbor. Deterministic.
// Errors: TooShortHistory (needs 2 frames).
PredictionSet social_force(const TrajectoryWindow& window,
                           const BaselineParams& params,
                           std::size_t num_samples = kDefaultSamples);

// Names accepted by run_baseline, in report order.
const std::vector<std::string>& baseline_names();

// Dispatch by name. Errors: ConfigError for unknown names, plus the
// baseline's own errors. The rng is consumed only by the stochastic models.
PredictionSet run_baseline(const std::string& name, const TrajectoryWindow& window,
                           const BaselineParams& params, Rng& rng,
                           std::size_t num_samples = kDefaultSamples);

}  // namespace trajevo::baselines
