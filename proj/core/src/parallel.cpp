#include "mosharp/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace mosharp {
namespace {

int workers_from_env() {
  if (const char* env = std::getenv("MOSHARP_WORKERS")) {
    try {
      const int w = std::stoi(env);
      if (w > 0) return w;
    } catch (...) {
    }
  }
  return 1;
}

std::atomic<int>& worker_setting() {
  static std::atomic<int> workers{workers_from_env()};
  return workers;
}

constexpr std::size_t kPairwiseBlock = 64;

double pairwise_recurse(const double* data, std::size_t n) {
  if (n <= kPairwiseBlock) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_recurse(data, half) + pairwise_recurse(data + half, n - half);
}

}  // namespace

int worker_count() { return worker_setting().load(); }

void set_worker_count(int workers) { worker_setting().store(std::max(1, workers)); }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
  if (n == 0) return;
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> threads;
  threads.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    threads.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(n, chunk));
}

double pairwise_sum(std::span<const double> values) {
  return pairwise_recurse(values.data(), values.size());
}

}  // namespace mosharp
