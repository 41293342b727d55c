#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace twotier {

inline std::size_t default_workers() {
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Runs body(chunk, begin, end) over `count` items split into contiguous
/// chunks, one per worker. Chunk boundaries depend only on (count, workers).
template <class Body>
void parallel_chunks(std::size_t count, std::size_t workers, Body&& body) {
    workers = std::clamp<std::size_t>(workers == 0 ? default_workers() : workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        body(std::size_t{0}, std::size_t{0}, count);
        return;
    }
    std::vector<std::thread> threads;
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t c = 0; c < workers; ++c) {
        const auto begin = count * c / workers;
        const auto end = count * (c + 1) / workers;
        threads.emplace_back([&, c, begin, end] {
            try {
                body(c, begin, end);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace twotier
