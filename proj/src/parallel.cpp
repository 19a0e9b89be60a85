#include "spinmarket/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace spinmarket {

int thread_cap() {
    int cap = 1;
#ifdef _OPENMP
    cap = omp_get_max_threads();
#endif
    if (const char* env = std::getenv("SPINMARKET_THREADS")) {
        try {
            const int requested = std::stoi(env);
            if (requested >= 1) cap = requested;
        } catch (const std::exception&) {
            // not a number: keep the default
        }
    }
    return cap;
}

namespace detail {

void run_indexed(std::size_t n, Execution exec, void (*body)(void*, std::size_t), void* ctx) {
    if (exec == Execution::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(ctx, i);
        return;
    }
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_cap())
    for (long long i = 0; i < count; ++i) body(ctx, static_cast<std::size_t>(i));
}

}  // namespace detail

}  // namespace spinmarket
