#include "shearmix/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace shearmix {
namespace {

std::atomic<std::size_t> g_default{0};

}  // namespace

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SHEARMIX_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_default_threads(std::size_t n) { g_default = n; }

std::size_t default_threads() {
  const std::size_t n = g_default.load();
  return n > 0 ? n : resolve_threads(0);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, std::size_t threads) {
  if (n == 0) return;
  const std::size_t workers = std::min(n, threads > 0 ? threads : default_threads());
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex err_mu;
  std::exception_ptr err;
  std::size_t err_index = n;
  auto work = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (i < err_index) {
          err_index = i;
          err = std::current_exception();
        }
        stop = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace shearmix
