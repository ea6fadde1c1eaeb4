#pragma once

#include <string>
#include <vector>

#include "trajevo/types.hpp"

namespace trajevo::exec {

// Why a prediction batch was rejected.
enum class InvalidReason { truncated, wrong_count, non_finite, parse_error };

const char* to_string(InvalidReason r);

// Wire protocol v1, engine -> candidate. Header "TRAJEVO 1 <num_windows>";
// per window a "W <A> <T_obs> <T_pred> <K>" line followed by A x T_obs
// observed "x y" lines (never the future), fixed-point nine decimals.
std::string frame_request(const std::vector<TrajectoryWindow>& windows,
                          std::size_t num_samples = kDefaultSamples);

struct ParseResult {
  bool ok = false;
  std::vector<PredictionSet> predictions;  // one per window when ok
  InvalidReason reason = InvalidReason::parse_error;
  std::string detail;
};

// Candidate -> engine: per window "P <A>" followed by K x A x T_pred "x y"
// lines, sample-major, then agent, then time. Shapes are validated against
// the engine's own windows; any deviation maps to an InvalidReason:
//   truncated   - the stream ended where a "P" header was expected
//   wrong_count - a block has the wrong agent count, too few point lines
//                 before end of stream, or trailing content after the last
//                 block (flooding lands here)
//   non_finite  - a point parsed to inf/nan
//   parse_error - a line that is not "P <int>" or two decimal numbers
// Blank lines are ignored. Never throws.
ParseResult parse_response(const std::string& text,
                           const std::vector<TrajectoryWindow>& windows,
                           std::size_t num_samples = kDefaultSamples);

}  // namespace trajevo::exec
