#pragma once

#include <cstddef>

namespace speechpanel {

// Selects between the OpenMP kernel and the serial reference loop. Both
// paths write each iteration's result to its own slot and combine serially,
// so they agree bitwise.
enum class Execution { Serial, Parallel };

// Threads used by parallel kernels. Reads SPEECHPANEL_THREADS once; falls back
// to the OpenMP default. Always 1 when built without OpenMP.
int default_thread_count();

// Overrides the thread count for subsequent parallel kernels (0 = default).
void set_thread_count(int threads);

int active_thread_count();

}  // namespace speechpanel
