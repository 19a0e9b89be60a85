#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "spinmarket/error.hpp"

namespace spinmarket {

enum class Execution { Serial, Parallel };

/// Worker count for replica/frame parallelism: SPINMARKET_THREADS if set
/// (values < 1 are ignored), else the OpenMP default.
int thread_cap();

namespace detail {
void run_indexed(std::size_t n, Execution exec, void (*body)(void*, std::size_t), void* ctx);
}

/**
 * out[i] = fn(i) for i in [0, n). Parallel execution writes each slot from
 * exactly one worker, so the result never depends on scheduling. The
 * lowest-index failure is rethrown as Error carrying "<what_prefix> <i>: ...".
 */
template <typename Fn>
auto parallel_map(std::size_t n, Execution exec, Fn&& fn, const char* what_prefix = "item")
    -> std::vector<decltype(fn(std::size_t{}))> {
    using T = decltype(fn(std::size_t{}));
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);

    struct Ctx {
        Fn* fn;
        std::vector<std::optional<T>>* slots;
        std::vector<std::exception_ptr>* errors;
    } ctx{&fn, &slots, &errors};

    detail::run_indexed(
        n, exec,
        [](void* raw, std::size_t i) {
            auto* c = static_cast<Ctx*>(raw);
            try {
                (*c->slots)[i].emplace((*c->fn)(i));
            } catch (...) {
                (*c->errors)[i] = std::current_exception();
            }
        },
        &ctx);

    for (std::size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        try {
            std::rethrow_exception(errors[i]);
        } catch (const Error& e) {
            throw Error(e.code(), std::string(what_prefix) + " " + std::to_string(i) + ": " + e.what());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::Io, std::string(what_prefix) + " " + std::to_string(i) + ": " + e.what());
        }
    }

    std::vector<T> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace spinmarket
