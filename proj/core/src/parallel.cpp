#include "ecrseg/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ecrseg {

namespace {
std::atomic<int> g_max_threads{0};
}

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() {
  const int cap = g_max_threads.load();
  if (cap > 0) return cap;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& chunk) {
  if (n <= 0) return;
  const int workers = int(std::min<std::int64_t>(max_threads(), n));
  if (workers <= 1) {
    chunk(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const std::int64_t per = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = std::int64_t(w) * per;
    const std::int64_t end = std::min(begin + per, n);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        chunk(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace ecrseg
