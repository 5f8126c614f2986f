#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace ontocrawl {

// Applies `fn` to every item with at most `max_workers` threads and returns
// the results in input order. The first exception thrown by `fn` is rethrown
// after all workers have finished.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, std::size_t max_workers, F fn)
    -> std::vector<std::invoke_result_t<F&, const T&>> {
  using R = std::invoke_result_t<F&, const T&>;
  std::vector<std::optional<R>> slots(items.size());
  std::vector<std::exception_ptr> errors(items.size());

  const std::size_t workers = std::min(std::max<std::size_t>(max_workers, 1), items.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < items.size(); ++i) slots[i].emplace(fn(items[i]));
  } else {
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (auto i = next.fetch_add(1); i < items.size(); i = next.fetch_add(1)) {
        try {
          slots[i].emplace(fn(items[i]));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace ontocrawl
