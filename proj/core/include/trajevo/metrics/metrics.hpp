#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajevo/types.hpp"

namespace trajevo::metrics {

// Aggregate scores for one window or one whole evaluation pass. Displacement
// numbers are in the window's units (meters or pixels); objective_j is in
// squared units.
struct ScoreReport {
  double min_ade = 0.0;
  double min_fde = 0.0;
  double objective_j = 0.0;
  std::vector<std::size_t> per_agent_best_k;  // by lowest ADE, ties -> lowest k
};

// How often each sample index produced the per-instance minimum ADE.
struct SflHistogram {
  std::vector<std::int64_t> counts;  // size K
  std::int64_t total = 0;
};

// Per-agent mean Euclidean displacement over the horizon.
// Errors: ShapeMismatch; NonFiniteValue.
std::vector<double> ade(const std::vector<Path>& pred,
                        const std::vector<Path>& truth);

// Per-agent displacement at the final step only. Errors: as ade.
std::vector<double> fde(const std::vector<Path>& pred,
                        const std::vector<Path>& truth);

struct MinOverK {
  std::vector<double> min;          // [A]
  std::vector<std::size_t> argmin;  // [A], ties -> lowest k
};

// Column-wise minimum of a [K][A] score matrix. Errors: EmptySampleAxis;
// ShapeMismatch when rows disagree on A.
MinOverK min_over_k(const std::vector<std::vector<double>>& per_sample_scores);

// Evolution objective: mean over agents of (min over samples of the mean
// squared per-step displacement). Lower is fitter. Errors: EmptySampleAxis;
// ShapeMismatch; NonFiniteValue.
double objective_j(const PredictionSet& predictions,
                   const std::vector<Path>& truth);

// Errors: IndexOutOfRange when an argmin is >= num_samples.
SflHistogram sfl_histogram(const std::vector<std::size_t>& argmins,
                           std::size_t num_samples);

// One line per index, "k=<i>: <count> (<percent>%)", percent to one decimal,
// no trailing newline. A zero total renders every percent as 0.0.
std::string render_sfl_text(const SflHistogram& h);

// Best-of-K scores of one prediction set against one window's ground truth:
// min_ade / min_fde are means over agents of the per-agent best sample (each
// chosen by its own metric); objective_j picks the best sample by squared
// displacement. Errors: ShapeMismatch; EmptySampleAxis; NonFiniteValue.
ScoreReport score_window(const PredictionSet& predictions,
                         const TrajectoryWindow& window);

// Streaming reduction over many windows; every mean is per agent-instance
// (one agent in one window), matching the per-instance SFL granularity.
class ScoreAccumulator {
 public:
  explicit ScoreAccumulator(std::size_t num_samples = kDefaultSamples);

  void add(const PredictionSet& predictions, const TrajectoryWindow& window);
  void add_report(const ScoreReport& report, std::size_t num_agents);

  std::size_t num_windows() const { return windows_; }
  std::size_t num_instances() const { return instances_; }
  ScoreReport report() const;         // per_agent_best_k left empty
  SflHistogram histogram() const;

 private:
  std::size_t num_samples_;
  std::size_t windows_ = 0;
  std::size_t instances_ = 0;
  double ade_sum_ = 0.0;
  double fde_sum_ = 0.0;
  double j_sum_ = 0.0;
  std::vector<std::int64_t> counts_;
};

}  // namespace trajevo::metrics
