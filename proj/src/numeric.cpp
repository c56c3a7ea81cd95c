#include "stabent/numeric.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

namespace stabent {

namespace {

double pairwise_sum_impl(const double* xs, std::size_t n) {
  if (n <= 16) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += xs[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(xs, half) + pairwise_sum_impl(xs + half, n - half);
}

std::atomic<int> g_thread_count{0};

}  // namespace

double pairwise_sum(std::span<const double> values) {
  return pairwise_sum_impl(values.data(), values.size());
}

int thread_count() {
  int cached = g_thread_count.load(std::memory_order_relaxed);
  if (cached > 0) return cached;
  if (const char* env = std::getenv("STABENT_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed > 0) {
      g_thread_count.store(parsed, std::memory_order_relaxed);
      return parsed;
    }
  }
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  g_thread_count.store(hw, std::memory_order_relaxed);
  return hw;
}

void set_thread_count(int count) {
  g_thread_count.store(count > 0 ? count : 0, std::memory_order_relaxed);
}

void parallel_ranges(std::size_t count, std::size_t serial_cutoff,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const int workers = thread_count();
  if (workers <= 1 || count < serial_cutoff) {
    fn(0, count);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(workers, count);
  const std::size_t chunk = (count + nthreads - 1) / nthreads;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t t = 0; t < nthreads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& th : pool) th.join();
}

double binary_entropy_bits(double x) {
  double acc = 0.0;
  if (x > 0.0) acc -= x * std::log2(x);
  if (x < 1.0) acc -= (1.0 - x) * std::log2(1.0 - x);
  return acc;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace stabent
