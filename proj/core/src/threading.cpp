#include "lrising/threading.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

#include "lrising/errors.hpp"

extern "C" void openblas_set_num_threads(int);

namespace lrising {

int configure_threads() {
  const char* env = std::getenv(kThreadsEnv);
  if (env != nullptr && *env != '\0') {
    std::size_t pos = 0;
    int n = 0;
    try {
      n = std::stoi(env, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || env[pos] != '\0' || n < 1) {
      throw ConfigError(std::string(kThreadsEnv) + ": expected a positive integer, got '" + env +
                        "'");
    }
    omp_set_num_threads(n);
    openblas_set_num_threads(n);
  }
  return omp_get_max_threads();
}

}  // namespace lrising
