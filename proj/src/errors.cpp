#include "speechpanel/errors.hpp"
#include "speechpanel/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace speechpanel {

TreeParseError::TreeParseError(const std::string& what, std::size_t offset)
    : FormatError(what + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {
int g_override = 0;
}

int default_thread_count() {
#ifdef _OPENMP
  static const int from_env = [] {
    if (const char* env = std::getenv("SPEECHPANEL_THREADS")) {
      const int n = std::atoi(env);
      if (n > 0) return n;
    }
    return omp_get_max_threads();
  }();
  return from_env;
#else
  return 1;
#endif
}

void set_thread_count(int threads) { g_override = threads > 0 ? threads : 0; }

int active_thread_count() {
#ifdef _OPENMP
  return g_override > 0 ? g_override : default_thread_count();
#else
  return 1;
#endif
}

}  // namespace speechpanel
