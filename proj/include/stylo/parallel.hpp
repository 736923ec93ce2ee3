#pragma once

#include <cstddef>
#include <functional>

namespace stylo {

/// Global worker bound (the CLI's --jobs). 0 means hardware concurrency.
void set_max_jobs(std::size_t jobs);
std::size_t max_jobs();

/// Runs body(i) for i in [0, n) on up to max_jobs() threads. Each index must
/// write only to its own output slot; the first exception (by index) is
/// rethrown after all workers finish. Calls nested inside a worker run
/// serially on that worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace stylo
