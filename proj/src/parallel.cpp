#include "cww/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cww {

namespace {
bool g_parallel = true;
} // namespace

bool parallel_enabled() {
#ifdef _OPENMP
    return g_parallel;
#else
    return false;
#endif
}

void set_parallel_enabled(bool on) { g_parallel = on; }

void set_thread_count(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace cww
