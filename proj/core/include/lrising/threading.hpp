#pragma once

namespace lrising {

/// Name of the environment variable holding the worker thread count.
inline constexpr const char* kThreadsEnv = "LRISING_NUM_THREADS";

/// Applies LRISING_NUM_THREADS (if set) to OpenMP and OpenBLAS and returns
/// the thread count in effect. Throws ConfigError for a malformed value.
int configure_threads();

}  // namespace lrising
