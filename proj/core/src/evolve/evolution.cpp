#include "trajevo/evolve/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace trajevo::evolve {

void EvolutionConfig::validate() const {
  auto ratio_in_range = [](double value) { return value >= 0.0 && value <= 1.0; };
  if (population_size < 2) {
    throw Error(Errc::config, "population_size must be at least 2");
  }
  if (!ratio_in_range(elite_ratio) || !ratio_in_range(exploration_ratio) ||
      !ratio_in_range(crossover_rate) || !ratio_in_range(mutation_rate)) {
    throw Error(Errc::config,
                "elite_ratio, exploration_ratio, crossover_rate, and mutation_rate "
                "must lie in [0, 1]");
  }
  if (!(cges_temperature > 0.0)) {
    throw Error(Errc::config, "cges_temperature must be positive");
  }
  if (max_generations == 0) {
    throw Error(Errc::config, "max_generations must be at least 1");
  }
}

std::string make_candidate_id(std::size_t generation, std::size_t slot,
                              const std::string& source) {
  return "g" + std::to_string(generation) + "-" + std::to_string(slot) + "-" +
         sha256_hex(source).substr(0, 8);
}

std::string normalize_candidate_source(const std::string& code) {
  std::string out = code;
  if (out.find("import numpy") == std::string::npos) {
    out = "import numpy as np\n\n" + out;
  }
  if (out.find("def predict_trajectory(") == std::string::npos) {
    static const std::regex def_re(R"(def\s+(predict_trajectory[A-Za-z0-9_]*)\s*\()");
    std::string last_name;
    for (auto it = std::sregex_iterator(out.begin(), out.end(), def_re);
         it != std::sregex_iterator(); ++it) {
      last_name = (*it)[1].str();
    }
    if (!last_name.empty()) {
      if (out.back() != '\n') out += '\n';
      out += "\npredict_trajectory = " + last_name + "\n";
    }
  }
  return out;
}

std::uint64_t candidate_eval_seed(std::uint64_t run_seed, const std::string& candidate_id) {
  return run_seed ^ std::stoull(sha256_hex(candidate_id).substr(0, 16), nullptr, 16);
}

std::vector<std::size_t> rank_by_objective(const std::vector<Candidate>& population) {
  std::vector<std::size_t> order(population.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Candidate& ca = population[a];
    const Candidate& cb = population[b];
    if (ca.ok() != cb.ok()) return ca.ok();
    if (ca.objective_j != cb.objective_j) return ca.objective_j < cb.objective_j;
    return ca.id < cb.id;
  });
  return order;
}

std::size_t elite_count(std::size_t ok_count, double elite_ratio) {
  if (ok_count == 0) return 0;
  const auto count =
      static_cast<std::size_t>(std::ceil(elite_ratio * static_cast<double>(ok_count)));
  return std::clamp<std::size_t>(count, 1, ok_count);
}

std::size_t draw_parent_slot(std::size_t ok_count, const EvolutionConfig& config,
                             Rng& rng) {
  if (ok_count == 0) {
    throw Error(Errc::insufficient_population, "no runnable candidates to select from");
  }
  if (rng.uniform() < config.exploration_ratio) {
    return rng.uniform_index(ok_count);
  }
  return rng.uniform_index(elite_count(ok_count, config.elite_ratio));
}

std::pair<std::size_t, std::size_t> select_parents(const std::vector<Candidate>& population,
                                                   const EvolutionConfig& config,
                                                   Rng& rng) {
  std::vector<std::size_t> ranked = rank_by_objective(population);
  std::size_t ok_count = 0;
  while (ok_count < ranked.size() && population[ranked[ok_count]].ok()) ++ok_count;
  if (ok_count < 2) {
    throw Error(Errc::insufficient_population,
                "parent selection needs at least 2 runnable candidates, have " +
                    std::to_string(ok_count));
  }

  std::size_t first = 0;
  std::size_t second = 0;
  bool distinct = false;
  for (int attempt = 0; attempt <= 10; ++attempt) {
    first = draw_parent_slot(ok_count, config, rng);
    second = draw_parent_slot(ok_count, config, rng);
    if (first != second) {
      distinct = true;
      break;
    }
  }
  if (!distinct) {
    first = 1;  // the two fittest distinct candidates
    second = 0;
  }

  // Rank order is fitness order, so the higher rank index is the worse parent.
  const std::size_t worse_rank = std::max(first, second);
  const std::size_t better_rank = std::min(first, second);
  return {ranked[worse_rank], ranked[better_rank]};
}

bool EliteArchive::contains(const std::string& candidate_id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const ArchiveEntry& e) { return e.candidate_id == candidate_id; });
}

void EliteArchive::add(ArchiveEntry entry) {
  if (contains(entry.candidate_id)) {
    throw Error(Errc::internal, "archive already holds candidate " + entry.candidate_id);
  }
  entries_.push_back(std::move(entry));
}

void EliteArchive::replace_entries(std::vector<ArchiveEntry> entries) {
  entries_ = std::move(entries);
}

std::vector<double> cges_probabilities(const EliteArchive& archive, double temperature) {
  if (archive.empty()) {
    throw Error(Errc::empty_archive, "cannot sample from an empty elite archive");
  }
  if (!(temperature > 0.0)) {
    throw Error(Errc::config, "softmax temperature must be positive");
  }
  const auto& entries = archive.entries();
  double lo = entries.front().objective_j;
  double hi = lo;
  for (const ArchiveEntry& entry : entries) {
    lo = std::min(lo, entry.objective_j);
    hi = std::max(hi, entry.objective_j);
  }
  const double span = hi - lo;

  std::vector<double> weights(entries.size());
  double total = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double normalized = span > 0.0 ? (entries[i].objective_j - lo) / span : 0.0;
    weights[i] = std::exp(-normalized / temperature);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return weights;
}

std::size_t cges_sample(const EliteArchive& archive, double temperature, Rng& rng) {
  const std::vector<double> probabilities = cges_probabilities(archive, temperature);
  const double draw = rng.uniform();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (draw < cumulative) return i;
  }
  return probabilities.size() - 1;  // guard against rounding at the far edge
}

void ReflectionStore::add_short(const std::string& worse_id, const std::string& better_id,
                                const std::string& text) {
  short_term[{worse_id, better_id}] = text;
}

const std::string* ReflectionStore::find_short(const std::string& worse_id,
                                               const std::string& better_id) const {
  auto it = short_term.find({worse_id, better_id});
  return it == short_term.end() ? nullptr : &it->second;
}

void ReflectionStore::append_long(const std::string& text) {
  if (text.empty()) return;
  if (!long_term.empty()) long_term += '\n';
  long_term += text;
}

const Candidate* RunState::find_candidate(const std::string& candidate_id) const {
  for (const Candidate& candidate : population) {
    if (candidate.id == candidate_id) return &candidate;
  }
  for (const Candidate& candidate : archived_candidates) {
    if (candidate.id == candidate_id) return &candidate;
  }
  return nullptr;
}

const LineageRecord* RunState::find_lineage(const std::string& candidate_id) const {
  for (const LineageRecord& record : lineage) {
    if (record.id == candidate_id) return &record;
  }
  return nullptr;
}

}  // namespace trajevo::evolve
