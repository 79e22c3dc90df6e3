#include "poolsim/common/parallel.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>
#include <string>

namespace poolsim {

int worker_threads(int requested) {
  int width = requested > 0 ? requested : omp_get_max_threads();
  if (const char* cap = std::getenv("POOLSIM_THREADS")) {
    try {
      const int c = std::stoi(cap);
      if (c > 0) width = std::min(width, c);
    } catch (const std::exception&) {
    }
  }
  return std::max(width, 1);
}

}  // namespace poolsim
