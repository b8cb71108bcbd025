#pragma once

#include <functional>

namespace pcq {

/// Worker count used by parallel_for; 1 disables threading.
void set_jobs(int jobs);
int get_jobs();

/// Runs fn(i) for i = 0..n-1, split across the configured workers.
/// Exceptions from workers are rethrown on the calling thread.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace pcq
