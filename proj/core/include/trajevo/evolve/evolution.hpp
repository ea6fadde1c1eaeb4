#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "trajevo/metrics/metrics.hpp"
#include "trajevo/rng.hpp"
#include "trajevo/types.hpp"

namespace trajevo::evolve {

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct EvolutionConfig {
  std::size_t population_size = 10;
  std::size_t init_count = 8;
  double elite_ratio = 0.3;
  double exploration_ratio = 0.7;
  double crossover_rate = 1.0;
  double mutation_rate = 0.5;
  double cges_temperature = 1.0;
  std::size_t max_generations = 10;
  std::uint64_t rng_seed = 0;

  // Throws Error(Errc::config) when a field is out of range.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Candidates
// ---------------------------------------------------------------------------

struct Candidate {
  std::string id;                     // "g<generation>-<slot>-<hash8>"
  std::string source;                 // runnable program text
  std::size_t generation = 0;
  std::vector<std::string> parent_ids;
  CandidateStatus status = CandidateStatus::untested;
  double objective_j = std::numeric_limits<double>::infinity();
  metrics::ScoreReport report;        // valid when status == ok
  metrics::SflHistogram sfl;          // valid when status == ok
  std::string failure_detail;         // stderr tail / parse reason for failures
  double eval_elapsed_s = 0.0;

  bool ok() const { return status == CandidateStatus::ok; }
};

// Stable identifier: generation, slot, and the first 8 hex digits of the
// source hash.
std::string make_candidate_id(std::size_t generation, std::size_t slot,
                              const std::string& source);

// Makes model-written heuristics executable: ensures numpy is imported and
// that a `predict_trajectory` entry point exists (aliasing the last
// `predict_trajectory_v<N>`-style definition when only that is present).
// Idempotent; returns the input unchanged when nothing is missing.
std::string normalize_candidate_source(const std::string& code);

// Derives the per-candidate seed forwarded to the interpreter shim so
// stochastic heuristics are reproducible run to run.
std::uint64_t candidate_eval_seed(std::uint64_t run_seed, const std::string& candidate_id);

// ---------------------------------------------------------------------------
// Parent selection
// ---------------------------------------------------------------------------

// Candidates ordered by fitness for selection purposes: every ok candidate
// precedes every failed one; ok candidates sort by objective ascending with
// the id as a deterministic tiebreak.
std::vector<std::size_t> rank_by_objective(const std::vector<Candidate>& population);

// Number of elite candidates among `ok_count` runnable ones: ceil(ratio * ok).
std::size_t elite_count(std::size_t ok_count, double elite_ratio);

// One parent draw over `ok_count` candidates ranked best-first: with
// probability exploration_ratio a uniform pick over all of them, otherwise a
// uniform pick over the elite prefix.  Returns a rank index in [0, ok_count).
std::size_t draw_parent_slot(std::size_t ok_count, const EvolutionConfig& config,
                             Rng& rng);

// Draws an ordered (worse, better) pair of distinct runnable candidates.
// Identical picks are re-drawn up to 10 times, after which the two fittest
// distinct candidates are used.  Throws Error(Errc::insufficient_population)
// with fewer than two runnable candidates.
std::pair<std::size_t, std::size_t> select_parents(const std::vector<Candidate>& population,
                                                   const EvolutionConfig& config,
                                                   Rng& rng);

// ---------------------------------------------------------------------------
// Elite archive
// ---------------------------------------------------------------------------

struct ArchiveEntry {
  std::string candidate_id;
  double objective_j = 0.0;
  std::size_t generation = 0;
};

// Append-only record of every candidate that ever reached the elite tier.
class EliteArchive {
 public:
  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& candidate_id) const;

  // Appends one entry; ids must be unique.
  void add(ArchiveEntry entry);

  void replace_entries(std::vector<ArchiveEntry> entries);  // checkpoint restore

 private:
  std::vector<ArchiveEntry> entries_;
};

// Sampling distribution over archive entries: softmax of -J/T after the
// objectives are min-max normalized to [0, 1] over the archive (an archive
// with equal objectives samples uniformly).  Probabilities sum to 1.
// Throws Error(Errc::empty_archive) on an empty archive.
std::vector<double> cges_probabilities(const EliteArchive& archive, double temperature);

// Draws one entry index from the distribution above.
std::size_t cges_sample(const EliteArchive& archive, double temperature, Rng& rng);

// ---------------------------------------------------------------------------
// Reflections
// ---------------------------------------------------------------------------

struct ReflectionStore {
  // (worse id, better id) -> hint text, at most 200 words each.
  std::map<std::pair<std::string, std::string>, std::string> short_term;
  // Accumulated cross-generation hints, one <20-word line per improvement.
  std::string long_term;

  void add_short(const std::string& worse_id, const std::string& better_id,
                 const std::string& text);
  const std::string* find_short(const std::string& worse_id,
                                const std::string& better_id) const;
  void append_long(const std::string& text);
};

// ---------------------------------------------------------------------------
// Run state (checkpointable)
// ---------------------------------------------------------------------------

// Parent links for every candidate ever created, kept so the ancestry of an
// exported heuristic can be reconstructed even after the intermediate
// candidates left the population.
struct LineageRecord {
  std::string id;
  std::size_t generation = 0;
  std::vector<std::string> parent_ids;
  std::string op;  // "seed" | "init" | "crossover" | "mutation"
};

struct RunState {
  std::string config_fingerprint;       // hash of the effective configuration
  EvolutionConfig config;
  std::size_t generation = 0;           // generations completed
  std::vector<Candidate> population;    // current population, rank order
  std::vector<ArchiveEntry> archive;
  // Candidate records referenced by the archive but no longer in the
  // population (sources and statistics needed for mutation prompts).
  std::vector<Candidate> archived_candidates;
  ReflectionStore reflections;
  std::vector<LineageRecord> lineage;   // creation order
  std::string rng_state;                // serialized generator state

  // Finds a candidate record by id in population or archived_candidates.
  const Candidate* find_candidate(const std::string& candidate_id) const;
  const LineageRecord* find_lineage(const std::string& candidate_id) const;
};

}  // namespace trajevo::evolve
