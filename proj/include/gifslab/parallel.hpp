#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace gifslab {

/// Number of worker threads, capped by the GIFS_LAB_THREADS environment
/// variable (default: hardware concurrency, at most 8, at least 1).
inline std::size_t worker_count() {
    std::size_t hw = std::thread::hardware_concurrency();
    std::size_t n = std::clamp<std::size_t>(hw, 1, 8);
    if (const char* env = std::getenv("GIFS_LAB_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) n = static_cast<std::size_t>(v);
    }
    return n;
}

/// Runs body(begin, end) on contiguous index chunks. Chunk boundaries are a
/// function of n and the worker count only, so any per-chunk results can be
/// combined in index order to keep the final value deterministic.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n < 2048) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

/// Deterministic max-reduction over [0, n): per-chunk partial maxima are
/// merged in chunk order. fold(i) must be pure.
template <class Fold>
double parallel_max(std::size_t n, double init, Fold&& fold) {
    const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(n, 1));
    if (workers <= 1 || n < 2048) {
        double acc = init;
        for (std::size_t i = 0; i < n; ++i) acc = std::max(acc, fold(i));
        return acc;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<double> partial((n + chunk - 1) / chunk, init);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w * chunk < n; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            double acc = init;
            for (std::size_t i = lo; i < hi; ++i) acc = std::max(acc, fold(i));
            partial[w] = acc;
        });
    }
    for (auto& t : pool) t.join();
    double acc = init;
    for (double v : partial) acc = std::max(acc, v);
    return acc;
}

}  // namespace gifslab
