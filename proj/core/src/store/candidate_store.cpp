#include "trajevo/store/candidate_store.hpp"

#include <algorithm>
#include <filesystem>

#include <json.hpp>

#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace trajevo::store {

namespace fs = std::filesystem;
using nlohmann::json;

CandidateStore::CandidateStore(std::string dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
}

std::string CandidateStore::file_name_for(const std::string& source) {
  return sha256_hex(source).substr(0, 16) + ".py";
}

std::string CandidateStore::put(const std::string& source) {
  const std::string name = file_name_for(source);
  const std::string path = path_of(name);
  if (!fs::exists(path)) {
    write_file(path, source);
  }
  return name;
}

std::string CandidateStore::path_of(const std::string& file_name) const {
  return dir_ + "/" + file_name;
}

ExportManifest export_best(const evolve::RunState& state,
                           const std::optional<metrics::ScoreReport>& heldout,
                           const std::string& out_dir) {
  const evolve::Candidate* best = nullptr;
  for (const evolve::Candidate& candidate : state.population) {
    if (!candidate.ok()) continue;
    if (best == nullptr || candidate.objective_j < best->objective_j ||
        (candidate.objective_j == best->objective_j && candidate.id < best->id)) {
      best = &candidate;
    }
  }
  if (best == nullptr) {
    throw Error(Errc::internal, "no runnable candidate to export");
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);

  ExportManifest manifest;
  manifest.best_id = best->id;
  manifest.source_file = "best.py";
  manifest.source_sha256 = sha256_hex(best->source);
  manifest.config_fingerprint = state.config_fingerprint;
  manifest.heldout = heldout;
  manifest.manifest_path = out_dir + "/manifest.json";

  // Ancestry chain: breadth-first over parent links, creation order within
  // a wave, deduplicated.
  std::vector<std::string> frontier = {best->id};
  std::vector<std::string> visited;
  while (!frontier.empty()) {
    std::vector<std::string> next;
    for (const std::string& id : frontier) {
      if (std::find(visited.begin(), visited.end(), id) != visited.end()) continue;
      visited.push_back(id);
      if (const evolve::LineageRecord* record = state.find_lineage(id)) {
        manifest.lineage.push_back(*record);
        for (const std::string& parent : record->parent_ids) next.push_back(parent);
      }
    }
    frontier = std::move(next);
  }

  write_file(out_dir + "/" + manifest.source_file, best->source);

  json j;
  j["best_id"] = manifest.best_id;
  j["source_file"] = manifest.source_file;
  j["source_sha256"] = manifest.source_sha256;
  j["config_fingerprint"] = manifest.config_fingerprint;
  j["objective_j_train"] = best->objective_j;
  if (heldout.has_value()) {
    j["heldout"] = {{"min_ade", heldout->min_ade},
                    {"min_fde", heldout->min_fde},
                    {"objective_j", heldout->objective_j}};
  }
  j["lineage"] = json::array();
  for (const evolve::LineageRecord& record : manifest.lineage) {
    j["lineage"].push_back({{"id", record.id},
                            {"generation", record.generation},
                            {"parent_ids", record.parent_ids},
                            {"op", record.op}});
  }
  write_file(manifest.manifest_path, j.dump(2) + "\n");
  return manifest;
}

}  // namespace trajevo::store
