#include "pmic/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pmic {

int default_workers() noexcept {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const auto threads = static_cast<std::size_t>(std::clamp<long>(workers, 1, static_cast<long>(count)));

  std::mutex mutex;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  const auto run_one = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard lock(mutex);
      if (i < failed_index) {
        failed_index = i;
        failure = std::current_exception();
      }
    }
  };

  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) run_one(i);
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace pmic
