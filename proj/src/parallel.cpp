#include "fbmatch/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fbmatch {

namespace {

std::atomic<int> g_max_threads{0};

int env_thread_cap() {
    const char* s = std::getenv("FBMATCH_THREADS");
    if (!s || !*s) return 0;
    char* end = nullptr;
    const long v = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || v < 0) return 0;
    return static_cast<int>(std::min<long>(v, 1024));
}

}  // namespace

void set_max_threads(int n) { g_max_threads.store(n < 0 ? 0 : n); }

int worker_count() {
    int cap = g_max_threads.load();
    if (cap == 0) cap = env_thread_cap();
    if (cap == 0) {
        const unsigned hw = std::thread::hardware_concurrency();
        cap = hw ? static_cast<int>(hw) : 1;
    }
    return std::max(1, cap);
}

void parallel_for(int begin, int end, const std::function<void(int)>& fn) {
    const int n = end - begin;
    if (n <= 0) return;

    const int workers = std::min(worker_count(), n);
    if (workers == 1) {
        for (int i = begin; i < end; ++i) fn(i);
        return;
    }

    // Static partition: worker w takes [begin + w*chunk, ...), remainder
    // spread over the first few workers.
    const int base = n / workers;
    const int extra = n % workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    int at = begin;
    for (int w = 0; w < workers; ++w) {
        const int len = base + (w < extra ? 1 : 0);
        const int lo = at;
        const int hi = at + len;
        at = hi;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace fbmatch
