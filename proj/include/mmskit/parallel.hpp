#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mmskit {

enum class Execution { serial, parallel };

/// Worker count used by parallel kernels (1 when built without OpenMP).
int max_threads();
/// Caps the worker count for subsequent parallel kernels; values < 1 reset to the default.
void set_threads(int threads);

/// Runs fn(i) for every i in [0, count). The parallel variant uses a dynamic OpenMP schedule;
/// an exception thrown by any index is rethrown after the loop, lowest index first, so both
/// variants fail identically.
template <class Fn>
void for_each_index(std::size_t count, Execution exec, Fn&& fn) {
    if (exec == Execution::serial || count < 2 || max_threads() < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    const long long total = static_cast<long long>(count);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 1) num_threads(max_threads())
#endif
    for (long long i = 0; i < total; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace mmskit
