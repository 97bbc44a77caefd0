#include "orbitalis/runtime.hpp"

#include <cstdlib>
#include <thread>

namespace orbitalis {

int max_threads() {
  static const int cached = [] {
    if (const char* env = std::getenv("ORBITALIS_THREADS")) {
      const int n = std::atoi(env);
      if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }();
  return cached;
}

}  // namespace orbitalis
