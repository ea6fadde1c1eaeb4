#pragma once

#include <string>

#include "trajevo/evolve/evolution.hpp"

namespace trajevo::store {

// Canonical JSON serialization of a run state.  Transient diagnostics
// (stderr tails, wall-clock timings) are excluded, so two runs that took
// different real time but made identical decisions serialize identically.
std::string run_state_to_json(const evolve::RunState& state);

// Inverse of run_state_to_json.  Throws Error(Errc::corrupt_checkpoint) on
// malformed input.
evolve::RunState run_state_from_json(const std::string& text);

// True when the two states serialize to the same canonical form.
bool states_equal(const evolve::RunState& a, const evolve::RunState& b);

// Writes {"checksum": sha256(state_json), "state": ...} to path (parent
// directories created).  Throws Error(Errc::io) on write failure.
void save_checkpoint(const evolve::RunState& state, const std::string& path);

// Reads a checkpoint back; throws Error(Errc::corrupt_checkpoint) when the
// file is unreadable, truncated, or fails the checksum.
evolve::RunState load_checkpoint(const std::string& path);

}  // namespace trajevo::store
