#include "trajevo/metrics/metrics.hpp"

#include <cmath>
#include <cstdio>

#include "trajevo/error.hpp"

namespace trajevo::metrics {

namespace {

void check_paths(const std::vector<Path>& pred, const std::vector<Path>& truth) {
  if (pred.size() != truth.size())
    throw Error(Errc::shape_mismatch,
                "agent count " + std::to_string(pred.size()) + " vs " +
                    std::to_string(truth.size()));
  for (std::size_t a = 0; a < pred.size(); ++a) {
    if (pred[a].size() != truth[a].size() || pred[a].empty())
      throw Error(Errc::shape_mismatch, "horizon mismatch at agent " + std::to_string(a));
    for (const Vec2& p : pred[a])
      if (!p.finite()) throw Error(Errc::non_finite_value, "prediction not finite");
    for (const Vec2& p : truth[a])
      if (!p.finite()) throw Error(Errc::non_finite_value, "ground truth not finite");
  }
}

}  // namespace

std::vector<double> ade(const std::vector<Path>& pred,
                        const std::vector<Path>& truth) {
  check_paths(pred, truth);
  std::vector<double> out(pred.size());
  for (std::size_t a = 0; a < pred.size(); ++a) {
    double sum = 0.0;
    for (std::size_t t = 0; t < pred[a].size(); ++t)
      sum += (pred[a][t] - truth[a][t]).norm();
    out[a] = sum / static_cast<double>(pred[a].size());
  }
  return out;
}

std::vector<double> fde(const std::vector<Path>& pred,
                        const std::vector<Path>& truth) {
  check_paths(pred, truth);
  std::vector<double> out(pred.size());
  for (std::size_t a = 0; a < pred.size(); ++a)
    out[a] = (pred[a].back() - truth[a].back()).norm();
  return out;
}

MinOverK min_over_k(const std::vector<std::vector<double>>& per_sample_scores) {
  if (per_sample_scores.empty())
    throw Error(Errc::empty_sample_axis, "no samples to minimize over");
  const std::size_t num_agents = per_sample_scores.front().size();
  for (const auto& row : per_sample_scores)
    if (row.size() != num_agents)
      throw Error(Errc::shape_mismatch, "ragged score matrix");

  MinOverK result;
  result.min.assign(num_agents, 0.0);
  result.argmin.assign(num_agents, 0);
  for (std::size_t a = 0; a < num_agents; ++a) {
    double best = per_sample_scores[0][a];
    std::size_t best_k = 0;
    for (std::size_t k = 1; k < per_sample_scores.size(); ++k) {
      if (per_sample_scores[k][a] < best) {
        best = per_sample_scores[k][a];
        best_k = k;
      }
    }
    result.min[a] = best;
    result.argmin[a] = best_k;
  }
  return result;
}

double objective_j(const PredictionSet& predictions,
                   const std::vector<Path>& truth) {
  if (predictions.num_samples == 0)
    throw Error(Errc::empty_sample_axis, "prediction set has no samples");
  if (predictions.num_agents != truth.size() || truth.empty())
    throw Error(Errc::shape_mismatch,
                "agent count " + std::to_string(predictions.num_agents) + " vs " +
                    std::to_string(truth.size()));
  for (const auto& path : truth)
    if (path.size() != predictions.horizon || predictions.horizon == 0)
      throw Error(Errc::shape_mismatch, "horizon mismatch");
  if (!predictions.all_finite())
    throw Error(Errc::non_finite_value, "prediction not finite");

  double agent_sum = 0.0;
  for (std::size_t a = 0; a < predictions.num_agents; ++a) {
    for (const Vec2& p : truth[a])
      if (!p.finite()) throw Error(Errc::non_finite_value, "ground truth not finite");
    double best = 0.0;
    for (std::size_t k = 0; k < predictions.num_samples; ++k) {
      double sq_sum = 0.0;
      for (std::size_t t = 0; t < predictions.horizon; ++t)
        sq_sum += (predictions.at(k, a, t) - truth[a][t]).norm_sq();
      const double mse = sq_sum / static_cast<double>(predictions.horizon);
      if (k == 0 || mse < best) best = mse;
    }
    agent_sum += best;
  }
  return agent_sum / static_cast<double>(predictions.num_agents);
}

SflHistogram sfl_histogram(const std::vector<std::size_t>& argmins,
                           std::size_t num_samples) {
  SflHistogram h;
  h.counts.assign(num_samples, 0);
  for (std::size_t k : argmins) {
    if (k >= num_samples)
      throw Error(Errc::index_out_of_range,
                  "argmin " + std::to_string(k) + " with K=" + std::to_string(num_samples));
    ++h.counts[k];
    ++h.total;
  }
  return h;
}

std::string render_sfl_text(const SflHistogram& h) {
  std::string out;
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    const double percent =
        h.total == 0 ? 0.0
                     : 100.0 * static_cast<double>(h.counts[k]) /
                           static_cast<double>(h.total);
    char line[64];
    std::snprintf(line, sizeof(line), "k=%zu: %lld (%.1f%%)", k,
                  static_cast<long long>(h.counts[k]), percent);
    if (k > 0) out += "\n";
    out += line;
  }
  return out;
}

ScoreReport score_window(const PredictionSet& predictions,
                         const TrajectoryWindow& window) {
  const std::size_t K = predictions.num_samples;
  if (K == 0) throw Error(Errc::empty_sample_axis, "prediction set has no samples");
  if (predictions.num_agents != window.num_agents() ||
      predictions.horizon != window.pred_len())
    throw Error(Errc::shape_mismatch, "prediction set does not match window");

  std::vector<std::vector<double>> ade_scores(K), fde_scores(K);
  for (std::size_t k = 0; k < K; ++k) {
    const auto paths = predictions.sample_paths(k);
    ade_scores[k] = ade(paths, window.future);
    fde_scores[k] = fde(paths, window.future);
  }
  const MinOverK best_ade = min_over_k(ade_scores);
  const MinOverK best_fde = min_over_k(fde_scores);

  ScoreReport report;
  report.per_agent_best_k = best_ade.argmin;
  double ade_sum = 0.0, fde_sum = 0.0;
  for (std::size_t a = 0; a < window.num_agents(); ++a) {
    ade_sum += best_ade.min[a];
    fde_sum += best_fde.min[a];
  }
  const double agents = static_cast<double>(window.num_agents());
  report.min_ade = ade_sum / agents;
  report.min_fde = fde_sum / agents;
  report.objective_j = objective_j(predictions, window.future);
  return report;
}

ScoreAccumulator::ScoreAccumulator(std::size_t num_samples)
    : num_samples_(num_samples), counts_(num_samples, 0) {}

void ScoreAccumulator::add(const PredictionSet& predictions,
                           const TrajectoryWindow& window) {
  add_report(score_window(predictions, window), window.num_agents());
}

void ScoreAccumulator::add_report(const ScoreReport& report,
                                  std::size_t num_agents) {
  if (report.per_agent_best_k.size() != num_agents)
    throw Error(Errc::shape_mismatch, "report lacks per-agent winners");
  for (std::size_t k : report.per_agent_best_k) {
    if (k >= num_samples_)
      throw Error(Errc::index_out_of_range, "argmin outside the sample axis");
    ++counts_[k];
  }
  const double agents = static_cast<double>(num_agents);
  ade_sum_ += report.min_ade * agents;
  fde_sum_ += report.min_fde * agents;
  j_sum_ += report.objective_j * agents;
  instances_ += num_agents;
  ++windows_;
}

ScoreReport ScoreAccumulator::report() const {
  ScoreReport r;
  if (instances_ == 0) return r;
  const double n = static_cast<double>(instances_);
  r.min_ade = ade_sum_ / n;
  r.min_fde = fde_sum_ / n;
  r.objective_j = j_sum_ / n;
  return r;
}

SflHistogram ScoreAccumulator::histogram() const {
  SflHistogram h;
  h.counts = counts_;
  h.total = static_cast<std::int64_t>(instances_);
  return h;
}

}  // namespace trajevo::metrics
