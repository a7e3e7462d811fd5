#pragma once

namespace ttlcache {

// Kernels with an OpenMP implementation also keep the plain loop they were
// derived from. Both produce the same results (see each kernel for the exact
// guarantee).
enum class Execution { Serial, Parallel };

// 0 restores the OpenMP default.
void set_thread_count(int threads);
int thread_count();

}  // namespace ttlcache
