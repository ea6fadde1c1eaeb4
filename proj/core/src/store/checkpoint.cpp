#include "trajevo/store/checkpoint.hpp"

#include <cmath>
#include <filesystem>

#include <json.hpp>

#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace trajevo::store {
namespace {

using nlohmann::json;
using evolve::ArchiveEntry;
using evolve::Candidate;
using evolve::EvolutionConfig;
using evolve::LineageRecord;
using evolve::RunState;

json config_to_json(const EvolutionConfig& config) {
  return json{{"population_size", config.population_size},
              {"init_count", config.init_count},
              {"elite_ratio", config.elite_ratio},
              {"exploration_ratio", config.exploration_ratio},
              {"crossover_rate", config.crossover_rate},
              {"mutation_rate", config.mutation_rate},
              {"cges_temperature", config.cges_temperature},
              {"max_generations", config.max_generations},
              {"rng_seed", config.rng_seed}};
}

EvolutionConfig config_from_json(const json& j) {
  EvolutionConfig config;
  config.population_size = j.at("population_size").get<std::size_t>();
  config.init_count = j.at("init_count").get<std::size_t>();
  config.elite_ratio = j.at("elite_ratio").get<double>();
  config.exploration_ratio = j.at("exploration_ratio").get<double>();
  config.crossover_rate = j.at("crossover_rate").get<double>();
  config.mutation_rate = j.at("mutation_rate").get<double>();
  config.cges_temperature = j.at("cges_temperature").get<double>();
  config.max_generations = j.at("max_generations").get<std::size_t>();
  config.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  return config;
}

json candidate_to_json(const Candidate& candidate) {
  json j;
  j["id"] = candidate.id;
  j["source"] = candidate.source;
  j["generation"] = candidate.generation;
  j["parent_ids"] = candidate.parent_ids;
  j["status"] = to_string(candidate.status);
  if (std::isfinite(candidate.objective_j)) {
    j["objective_j"] = candidate.objective_j;
  } else {
    j["objective_j"] = nullptr;
  }
  if (candidate.ok()) {
    j["min_ade"] = candidate.report.min_ade;
    j["min_fde"] = candidate.report.min_fde;
    j["sfl_counts"] = candidate.sfl.counts;
    j["sfl_total"] = candidate.sfl.total;
  }
  return j;
}

Candidate candidate_from_json(const json& j) {
  Candidate candidate;
  candidate.id = j.at("id").get<std::string>();
  candidate.source = j.at("source").get<std::string>();
  candidate.generation = j.at("generation").get<std::size_t>();
  candidate.parent_ids = j.at("parent_ids").get<std::vector<std::string>>();
  candidate.status = candidate_status_from_string(j.at("status").get<std::string>());
  if (j.contains("objective_j") && j["objective_j"].is_number()) {
    candidate.objective_j = j["objective_j"].get<double>();
  }
  if (candidate.ok()) {
    candidate.report.min_ade = j.value("min_ade", 0.0);
    candidate.report.min_fde = j.value("min_fde", 0.0);
    candidate.report.objective_j = candidate.objective_j;
    if (j.contains("sfl_counts")) {
      candidate.sfl.counts = j["sfl_counts"].get<std::vector<std::int64_t>>();
      candidate.sfl.total = j.value("sfl_total", std::int64_t{0});
    }
  }
  return candidate;
}

json state_to_json_value(const RunState& state) {
  json j;
  j["config_fingerprint"] = state.config_fingerprint;
  j["config"] = config_to_json(state.config);
  j["generation"] = state.generation;

  j["population"] = json::array();
  for (const Candidate& candidate : state.population) {
    j["population"].push_back(candidate_to_json(candidate));
  }

  j["archive"] = json::array();
  for (const ArchiveEntry& entry : state.archive) {
    j["archive"].push_back({{"candidate_id", entry.candidate_id},
                            {"objective_j", entry.objective_j},
                            {"generation", entry.generation}});
  }

  j["archived_candidates"] = json::array();
  for (const Candidate& candidate : state.archived_candidates) {
    j["archived_candidates"].push_back(candidate_to_json(candidate));
  }

  j["reflections"] = json::object();
  j["reflections"]["short_term"] = json::array();
  for (const auto& [key, text] : state.reflections.short_term) {
    j["reflections"]["short_term"].push_back(
        {{"worse_id", key.first}, {"better_id", key.second}, {"text", text}});
  }
  j["reflections"]["long_term"] = state.reflections.long_term;

  j["lineage"] = json::array();
  for (const LineageRecord& record : state.lineage) {
    j["lineage"].push_back({{"id", record.id},
                            {"generation", record.generation},
                            {"parent_ids", record.parent_ids},
                            {"op", record.op}});
  }

  j["rng_state"] = state.rng_state;
  return j;
}

RunState state_from_json_value(const json& j) {
  RunState state;
  state.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  state.config = config_from_json(j.at("config"));
  state.generation = j.at("generation").get<std::size_t>();

  for (const json& item : j.at("population")) {
    state.population.push_back(candidate_from_json(item));
  }
  for (const json& item : j.at("archive")) {
    ArchiveEntry entry;
    entry.candidate_id = item.at("candidate_id").get<std::string>();
    entry.objective_j = item.at("objective_j").get<double>();
    entry.generation = item.at("generation").get<std::size_t>();
    state.archive.push_back(std::move(entry));
  }
  for (const json& item : j.at("archived_candidates")) {
    state.archived_candidates.push_back(candidate_from_json(item));
  }

  const json& reflections = j.at("reflections");
  for (const json& item : reflections.at("short_term")) {
    state.reflections.add_short(item.at("worse_id").get<std::string>(),
                                item.at("better_id").get<std::string>(),
                                item.at("text").get<std::string>());
  }
  state.reflections.long_term = reflections.at("long_term").get<std::string>();

  for (const json& item : j.at("lineage")) {
    LineageRecord record;
    record.id = item.at("id").get<std::string>();
    record.generation = item.at("generation").get<std::size_t>();
    record.parent_ids = item.at("parent_ids").get<std::vector<std::string>>();
    record.op = item.at("op").get<std::string>();
    state.lineage.push_back(std::move(record));
  }

  state.rng_state = j.at("rng_state").get<std::string>();
  return state;
}

}  // namespace

std::string run_state_to_json(const RunState& state) {
  return state_to_json_value(state).dump();
}

RunState run_state_from_json(const std::string& text) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error(Errc::corrupt_checkpoint, "run state is not a JSON object");
  }
  try {
    return state_from_json_value(parsed);
  } catch (const json::exception& err) {
    throw Error(Errc::corrupt_checkpoint,
                std::string("run state is missing fields: ") + err.what());
  }
}

bool states_equal(const RunState& a, const RunState& b) {
  return run_state_to_json(a) == run_state_to_json(b);
}

void save_checkpoint(const RunState& state, const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }

  const std::string state_json = run_state_to_json(state);
  json file;
  file["checksum"] = sha256_hex(state_json);
  file["state"] = json::parse(state_json);
  write_file(path, file.dump() + "\n");
}

RunState load_checkpoint(const std::string& path) {
  std::string content;
  try {
    content = read_file(path);
  } catch (const Error& err) {
    throw Error(Errc::corrupt_checkpoint,
                "cannot read checkpoint " + path + ": " + err.what());
  }
  json parsed = json::parse(content, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object() || !parsed.contains("checksum") ||
      !parsed.contains("state")) {
    throw Error(Errc::corrupt_checkpoint, "checkpoint file is malformed: " + path);
  }
  const std::string state_json = parsed["state"].dump();
  if (sha256_hex(state_json) != parsed["checksum"].get<std::string>()) {
    throw Error(Errc::corrupt_checkpoint, "checkpoint checksum mismatch: " + path);
  }
  return run_state_from_json(state_json);
}

}  // namespace trajevo::store
