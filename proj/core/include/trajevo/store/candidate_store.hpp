#pragma once

#include <optional>
#include <string>

#include "trajevo/evolve/evolution.hpp"
#include "trajevo/metrics/metrics.hpp"

namespace trajevo::store {

// Content-addressed store of candidate program texts: each distinct source is
// written once as <dir>/<sha256-prefix>.py.
class CandidateStore {
 public:
  explicit CandidateStore(std::string dir);

  // Writes the source if absent; returns the file name (relative to dir()).
  // Identical texts map to the same file.
  std::string put(const std::string& source);

  // Absolute-ish path (dir() + "/" + name) for a stored file name.
  std::string path_of(const std::string& file_name) const;

  const std::string& dir() const { return dir_; }

  // File name a given source would be stored under.
  static std::string file_name_for(const std::string& source);

 private:
  std::string dir_;
};

// Everything export_best() wrote, echoed back to the caller.
struct ExportManifest {
  std::string best_id;
  std::string source_file;      // file name inside out_dir
  std::string source_sha256;
  std::string config_fingerprint;
  std::optional<metrics::ScoreReport> heldout;  // set when an evaluation ran
  std::vector<evolve::LineageRecord> lineage;   // best-first ancestry chain
  std::string manifest_path;    // out_dir/manifest.json
};

// Writes the best candidate's source, the configuration fingerprint, the
// held-out score report (when provided), and the ancestry chain to out_dir.
// Re-exporting the same state produces identical files.  Throws
// Error(Errc::io) on write failure and Error(Errc::internal) when the state
// has no runnable candidate.
ExportManifest export_best(const evolve::RunState& state,
                           const std::optional<metrics::ScoreReport>& heldout,
                           const std::string& out_dir);

}  // namespace trajevo::store
