#pragma once

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace aircomp_ia {

/// Worker count: AIRCOMP_IA_THREADS caps it, hardware concurrency is the
/// default, minimum 1.
inline unsigned worker_count() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("AIRCOMP_IA_THREADS")) {
        const long requested = std::strtol(env, nullptr, 10);
        if (requested >= 1 && static_cast<unsigned>(requested) < hw) return static_cast<unsigned>(requested);
        if (requested >= 1) return static_cast<unsigned>(requested);
    }
    return hw;
}

/// Static-chunked parallel loop; body(i) must only write state owned by
/// index i so results are independent of scheduling.
template <class Body>
void parallel_for(std::uint64_t count, const Body& body) {
    const unsigned workers = worker_count();
    if (workers <= 1 || count <= 1) {
        for (std::uint64_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w]() {
            for (std::uint64_t i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : threads) t.join();
}

}  // namespace aircomp_ia
