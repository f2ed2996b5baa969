#include "scrambler/parallel.hpp"

#include <cstdlib>

namespace scrambler {

uint32_t resolve_threads(uint32_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SCRAMBLER_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<uint32_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace scrambler
