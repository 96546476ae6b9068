#include "torus/workers.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace torus {

int worker_limit() {
    if (const char* env = std::getenv("TORUS_EULER_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void run_jobs(std::size_t count, const std::function<void(std::size_t)>& job, int workers) {
    const std::size_t n = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, workers)));
    if (n <= 1) {
        for (std::size_t i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (std::size_t w = 0; w < n; ++w) {
        pool.emplace_back([&] {
            while (!stop) {
                const std::size_t i = next++;
                if (i >= count) break;
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!first) first = std::current_exception();
                    stop = true;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

}  // namespace torus
