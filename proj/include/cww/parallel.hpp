#pragma once

namespace cww {

// Process-wide switch between the OpenMP kernels and their serial reference
// implementations. Results are bit-identical either way (exact arithmetic);
// the serial paths are kept for testing and benchmarking.
bool parallel_enabled();
void set_parallel_enabled(bool on);
void set_thread_count(int n);  // n <= 0 restores the OpenMP default
int thread_count();

} // namespace cww
