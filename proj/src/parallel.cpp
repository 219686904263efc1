#include "mmskit/parallel.hpp"

#include <atomic>

namespace mmskit {

namespace {
std::atomic<int> g_thread_cap{0};
}

int max_threads() {
#ifdef _OPENMP
    const int cap = g_thread_cap.load();
    return cap > 0 ? cap : omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int threads) { g_thread_cap.store(threads > 0 ? threads : 0); }

}  // namespace mmskit
