#include "trajevo/assets.hpp"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>

#include "trajevo/error.hpp"
#include "trajevo/util/text.hpp"

namespace fs = std::filesystem;

namespace trajevo {

static std::string exe_dir() {
  char buf[4096];
  const ssize_t n = ::readlink("/proc/self/exe", buf, sizeof(buf) - 1);
  if (n <= 0) return "";
  buf[n] = '\0';
  return fs::path(buf).parent_path().string();
}

std::string asset_dir() {
  if (const char* env = std::getenv("TRAJEVO_ASSET_DIR")) {
    if (fs::is_directory(env)) return env;
    throw Error::config(std::string("TRAJEVO_ASSET_DIR is not a directory: ") + env);
  }
#ifdef TRAJEVO_SOURCE_ASSET_DIR
  if (fs::is_directory(TRAJEVO_SOURCE_ASSET_DIR)) return TRAJEVO_SOURCE_ASSET_DIR;
#endif
  const std::string exe = exe_dir();
  if (!exe.empty()) {
    const fs::path installed = fs::path(exe) / ".." / "share" / "trajevo" / "assets";
    if (fs::is_directory(installed)) return fs::weakly_canonical(installed).string();
  }
  throw Error::config("no asset directory found (set TRAJEVO_ASSET_DIR)");
}

std::string asset_path(const std::string& relative) {
  return (fs::path(asset_dir()) / relative).string();
}

std::string load_asset(const std::string& relative) {
  return read_file(asset_path(relative));
}

}  // namespace trajevo
