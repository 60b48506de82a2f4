// SPDX-License-Identifier: MIT
#include "parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "skorokhod/diffusion.hpp"

namespace skorokhod {

int default_thread_count() {
    if (const char* env = std::getenv("SKOROKHOD_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
            // fall through to the hardware count
        }
    }
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace detail {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t, std::size_t)>& body) {
    if (n == 0) return;
    const std::size_t t = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
    if (t == 1) {
        body(0, n);
        return;
    }
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (std::size_t k = 0; k < t; ++k) {
        const std::size_t begin = n * k / t;
        const std::size_t end = n * (k + 1) / t;
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                const std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail
}  // namespace skorokhod
