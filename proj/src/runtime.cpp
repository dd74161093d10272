#include "seamweld/runtime.hpp"

#include <atomic>
#include <cstdlib>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace seamweld::runtime {

namespace {
std::atomic<int> g_override{0};

int env_threads() {
    const char* s = std::getenv("SEAMWELD_THREADS");
    if (s == nullptr) return 0;
    int n = std::atoi(s);
    return n > 0 ? n : 0;
}
} // namespace

int max_threads() {
    int n = g_override.load(std::memory_order_relaxed);
    if (n <= 0) n = env_threads();
#if defined(_OPENMP)
    if (n <= 0) n = omp_get_max_threads();
#endif
    return n > 0 ? n : 1;
}

void set_max_threads(int n) {
    g_override.store(n > 0 ? n : 0, std::memory_order_relaxed);
}

} // namespace seamweld::runtime
