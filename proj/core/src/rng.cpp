#include "trajevo/rng.hpp"

#include <sstream>

#include "trajevo/error.hpp"

namespace trajevo {

std::string Rng::serialize() const {
  std::ostringstream ss;
  ss << state_[0] << " " << state_[1] << " " << state_[2] << " " << state_[3];
  return ss.str();
}

Rng Rng::deserialize(const std::string& text) {
  std::istringstream ss(text);
  std::array<std::uint64_t, 4> s{};
  if (!(ss >> s[0] >> s[1] >> s[2] >> s[3]))
    throw Error(Errc::corrupt_checkpoint, "bad rng state '" + text + "'");
  Rng r;
  r.set_state(s);
  return r;
}

}  // namespace trajevo
