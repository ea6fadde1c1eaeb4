#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trajevo {

enum class Errc {
  malformed_line,
  duplicate_observation,
  non_finite_value,
  unknown_dataset,
  shape_mismatch,
  empty_sample_axis,
  index_out_of_range,
  too_short_history,
  missing_placeholder,
  no_code_block,
  auth,
  rate_limited,
  transport,
  empty_response,
  script_exhausted,
  insufficient_population,
  empty_archive,
  all_candidates_failed,
  corrupt_checkpoint,
  config,
  io,
  mismatch,
  internal,
};

const char* to_string(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

  static Error malformed_line(const std::string& path, std::int64_t line_no,
                              const std::string& detail);
  static Error duplicate_observation(std::int64_t frame, std::int64_t agent);
  static Error io(const std::string& detail);
  static Error config(const std::string& detail);

 private:
  Errc code_;
};

}  // namespace trajevo
