#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>

namespace stabent {

// Pairwise (tree) summation. The reduction order depends only on the length,
// so repeated runs and parallel callers that sum fixed-size blocks get
// bit-identical results.
double pairwise_sum(std::span<const double> values);

// Thread count used by the data-parallel kernels. Defaults to
// STABENT_THREADS if set, else std::thread::hardware_concurrency().
int thread_count();
void set_thread_count(int count);

// Runs fn(begin, end) over a partition of [0, count) on up to thread_count()
// workers. Falls back to a single inline call when count < serial_cutoff.
// Workers own disjoint ranges; callers must write to disjoint slots so the
// result is independent of the worker count.
void parallel_ranges(std::size_t count, std::size_t serial_cutoff,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// Binary entropy in bits, H(x) = -x log2 x - (1-x) log2 (1-x).
double binary_entropy_bits(double x);

// Splitmix-style stream derivation, used to give sub-tasks independent seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace stabent
