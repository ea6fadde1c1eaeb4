#include "trajevo/error.hpp"

#include "trajevo/types.hpp"

namespace trajevo {

const char* to_string(Errc c) {
  switch (c) {
    case Errc::malformed_line: return "MalformedLine";
    case Errc::duplicate_observation: return "DuplicateObservation";
    case Errc::non_finite_value: return "NonFiniteValue";
    case Errc::unknown_dataset: return "UnknownDataset";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::empty_sample_axis: return "EmptySampleAxis";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::too_short_history: return "TooShortHistory";
    case Errc::missing_placeholder: return "MissingPlaceholder";
    case Errc::no_code_block: return "NoCodeBlock";
    case Errc::auth: return "AuthError";
    case Errc::rate_limited: return "RateLimited";
    case Errc::transport: return "Transport";
    case Errc::empty_response: return "EmptyResponse";
    case Errc::script_exhausted: return "ScriptExhausted";
    case Errc::insufficient_population: return "InsufficientPopulation";
    case Errc::empty_archive: return "EmptyArchive";
    case Errc::all_candidates_failed: return "AllCandidatesFailed";
    case Errc::corrupt_checkpoint: return "CorruptCheckpoint";
    case Errc::config: return "ConfigError";
    case Errc::io: return "IoError";
    case Errc::mismatch: return "Mismatch";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

Error Error::malformed_line(const std::string& path, std::int64_t line_no,
                            const std::string& detail) {
  return Error(Errc::malformed_line,
               path + ":" + std::to_string(line_no) + ": " + detail);
}

Error Error::duplicate_observation(std::int64_t frame, std::int64_t agent) {
  return Error(Errc::duplicate_observation, "frame " + std::to_string(frame) +
                                                ", agent " + std::to_string(agent));
}

Error Error::io(const std::string& detail) { return Error(Errc::io, detail); }

Error Error::config(const std::string& detail) { return Error(Errc::config, detail); }

const char* to_string(CandidateStatus s) {
  switch (s) {
    case CandidateStatus::untested: return "untested";
    case CandidateStatus::ok: return "ok";
    case CandidateStatus::crash: return "crash";
    case CandidateStatus::timeout: return "timeout";
    case CandidateStatus::invalid_output: return "invalid_output";
  }
  return "untested";
}

CandidateStatus candidate_status_from_string(const std::string& s) {
  if (s == "ok") return CandidateStatus::ok;
  if (s == "crash") return CandidateStatus::crash;
  if (s == "timeout") return CandidateStatus::timeout;
  if (s == "invalid_output") return CandidateStatus::invalid_output;
  return CandidateStatus::untested;
}

}  // namespace trajevo
