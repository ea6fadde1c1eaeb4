#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajevo/exec/protocol.hpp"
#include "trajevo/types.hpp"

namespace trajevo::exec {

struct ExecLimits {
  double wall_timeout = 60.0;                    // seconds per invocation
  std::size_t max_output_bytes = 256ull << 20;   // stdout cap
  std::size_t batch_size = SIZE_MAX;             // windows per invocation; default: all

  void validate() const;  // Errors: ConfigError when any field is <= 0
};

// How to launch a candidate. The argv template is expanded per invocation:
//   {shim}   -> absolute path of the shim asset
//   {source} -> path of the candidate source written to the work dir
//   {seed}   -> decimal seed for the candidate's own randomness
struct InterpreterProfile {
  std::string name = "python3";
  std::vector<std::string> argv_template = {"python3", "{shim}", "{source}",
                                            "{seed}"};
  std::string shim_asset = "shims/python_shim.py";
  std::string source_suffix = ".py";  // loaders pick by extension

  std::vector<std::string> expand(const std::string& source_path,
                                  std::uint64_t seed) const;
};

// Raw one-process run, decoupled from the protocol for testability.
struct ProcessResult {
  int exit_code = 0;        // meaningful when !timed_out; 128+sig on signals
  bool timed_out = false;   // killed at the wall deadline
  bool stdout_capped = false;
  std::string stdout_data;  // at most max_output_bytes
  std::string stderr_tail;  // last 4 KiB
  double elapsed_s = 0.0;
};

// Launch argv with stdin_data on its stdin, collect stdout/stderr, enforce
// the wall clock by SIGKILLing the whole process group at the deadline.
// Never throws for candidate misbehavior; throws Error(Errc::internal) only
// for engine-side failures (pipe/fork exhaustion).
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& stdin_data, double wall_timeout,
                          std::size_t max_output_bytes);

struct ExecOutcome {
  CandidateStatus status = CandidateStatus::untested;
  std::vector<PredictionSet> predictions;  // one per window when status == ok
  std::string stderr_tail;
  std::string invalid_reason;  // set when status == invalid_output
  std::string detail;
  double elapsed_s = 0.0;
};

// Evaluate candidate source over the windows: write the source to work_dir,
// frame batched requests, run one interpreter process per batch, parse and
// merge. The first failing batch decides the non-ok status. Statuses:
//   ok             - every batch parsed cleanly
//   crash          - a process exited nonzero (or died to a signal)
//   timeout        - a process hit the wall deadline
//   invalid_output - exit 0 but the response violated the protocol
ExecOutcome execute(const std::string& source,
                    const std::vector<TrajectoryWindow>& windows,
                    const ExecLimits& limits, const InterpreterProfile& profile,
                    const std::string& work_dir, std::uint64_t seed = 0,
                    std::size_t num_samples = kDefaultSamples);

}  // namespace trajevo::exec
