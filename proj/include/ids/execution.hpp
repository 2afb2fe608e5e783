#pragma once

namespace ids {

/// Selects between the OpenMP kernel and its serial reference. Both produce
/// bit-identical results; the serial path exists for testing and benchmarking.
enum class Execution { serial, parallel };

/// Sets the OpenMP thread count for subsequent parallel kernels (n >= 1).
void set_thread_count(int n);

/// Number of threads a parallel region would currently use.
int thread_count();

}  // namespace ids
