#include "pcq/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "pcq/types.hpp"

namespace pcq {

namespace {
std::atomic<int> g_jobs{1};
}

void set_jobs(int jobs) {
    if (jobs < 1) throw ContractError("set_jobs: need jobs >= 1");
    g_jobs.store(jobs);
}

int get_jobs() { return g_jobs.load(); }

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int jobs = std::min(g_jobs.load(), n);
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace pcq
