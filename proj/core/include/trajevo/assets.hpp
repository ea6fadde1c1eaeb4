#pragma once

#include <string>

namespace trajevo {

// Directory holding the bundled data assets (prompt templates, interpreter
// shims, the seed program). Resolution order:
//   1. $TRAJEVO_ASSET_DIR, when set,
//   2. the build-tree asset directory compiled into the library,
//   3. <executable dir>/../share/trajevo/assets (installed layout).
// Throws Error(Errc::config) when none of them exists.
std::string asset_dir();

// Convenience: read `asset_dir() + "/" + relative`.
std::string load_asset(const std::string& relative);

std::string asset_path(const std::string& relative);

}  // namespace trajevo
