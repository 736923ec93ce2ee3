#include "stylo/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace stylo {

namespace {
std::atomic<std::size_t> g_max_jobs{0};
// Nested calls from inside a worker run inline, so the bound holds globally.
thread_local bool t_in_worker = false;
}

void set_max_jobs(std::size_t jobs) { g_max_jobs = jobs; }

std::size_t max_jobs() {
  std::size_t j = g_max_jobs.load();
  if (j == 0) j = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return j;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(max_jobs(), n);
  if (workers <= 1 || t_in_worker) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> cursor{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      t_in_worker = true;
      for (std::size_t i = cursor++; i < n; i = cursor++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace stylo
