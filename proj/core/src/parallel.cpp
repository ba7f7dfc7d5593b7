#include "fkswitch/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace fkswitch {

int worker_count(int requested) {
    if (requested > 0) {
        return requested;
    }
    int limit = 0;
    if (const char* env = std::getenv("FKSWITCH_THREADS")) {
        try {
            limit = std::stoi(env);
        } catch (...) {
            limit = 0;
        }
    }
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (limit > 0 && limit < hw) {
        return limit;
    }
    return hw;
}

void parallel_for(std::size_t begin, std::size_t end, int threads,
                  const std::function<void(std::size_t)>& task) {
    if (begin >= end) return;
    const std::size_t count = end - begin;
    int workers = worker_count(threads);
    if (static_cast<std::size_t>(workers) > count) {
        workers = static_cast<int>(count);
    }
    if (workers <= 1) {
        for (std::size_t i = begin; i < end; ++i) task(i);
        return;
    }

    std::atomic<std::size_t> next{begin};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto drain = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= end || failed.load(std::memory_order_relaxed)) break;
            try {
                task(i);
            } catch (...) {
                if (!failed.exchange(true)) {
                    failure = std::current_exception();
                }
                break;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers) - 1);
    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(drain);
    }
    drain();
    for (auto& t : pool) t.join();

    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace fkswitch
