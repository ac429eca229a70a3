#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace tubegeo::detail {

/// Worker cap: TUBE_GEODESICS_THREADS when set (positive), else hardware
/// concurrency clamped to 8.
inline int thread_cap() {
    if (const char* env = std::getenv("TUBE_GEODESICS_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc > 8 ? 8 : hc) : 1;
}

/// Static index partition over joined threads; each index writes only its
/// own output slot, so results do not depend on scheduling.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
    int workers = thread_cap();
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    if (static_cast<std::size_t>(workers) > count) workers = static_cast<int>(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += workers) body(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

}  // namespace tubegeo::detail
