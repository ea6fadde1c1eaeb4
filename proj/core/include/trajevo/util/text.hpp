#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace trajevo {

// Shortest decimal form with nine significant digits ("%.9g"); used by the
// window serialization format.
std::string fmt_g9(double v);

// Fixed-point with nine decimal places ("%.9f"); the candidate wire protocol
// pins this exact formatting (zero renders as "0.000000000").
std::string fmt_f9(double v);

// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& data);

// First `max_words` whitespace-delimited words, single-space joined.
// Returns the input unchanged (modulo nothing) when it is already within
// budget; never rejects.
std::string truncate_words(const std::string& text, std::size_t max_words);

std::size_t count_words(const std::string& text);

// Replace every occurrence of `needle` with `replacement`.
std::string replace_all(std::string text, const std::string& needle,
                        const std::string& replacement);

std::string trim(const std::string& text);

// Split on '\n'; a trailing newline does not produce an empty final element.
std::vector<std::string> split_lines(const std::string& text);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

bool starts_with(const std::string& text, const std::string& prefix);

// Current UTC time as "YYYY-MM-DDTHH:MM:SS.mmmZ".
std::string utc_timestamp();

// Monotonic seconds, for latency measurements.
double monotonic_seconds();

// Whole-file read/write. Throw Error(Errc::io) on failure.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace trajevo
