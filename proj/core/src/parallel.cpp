#include "tunnelkit/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace tunnelkit {

std::size_t thread_budget(std::size_t requested, std::size_t tasks) {
    std::size_t n = requested;
    if (n == 0) {
        if (const char* env = std::getenv("TUNNELKIT_THREADS"); env != nullptr && *env != '\0') {
            try {
                n = static_cast<std::size_t>(std::max(1L, std::stol(env)));
            } catch (const std::exception&) {
                n = 1;
            }
        } else {
            n = std::max(1u, std::thread::hardware_concurrency());
        }
    }
    return std::max<std::size_t>(1, std::min(n, tasks));
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    threads = std::max<std::size_t>(1, std::min(threads, count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (std::size_t w = 0; w < threads; ++w) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        body(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace tunnelkit
