#pragma once

#include <cstddef>
#include <span>

namespace adlab {

/// Worker count: hardware/OpenMP default capped by the ADLAB_THREADS
/// environment variable when it holds a positive integer.
int thread_count();

/// Overrides the worker count for the current process (0 restores the default).
void set_thread_count(int threads);

/// Runs body(i) for i in [0, count). Iterations must be independent; the
/// result of each iteration may not depend on the schedule.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(static) num_threads(thread_count())
  for (long long i = 0; i < n; ++i) body(static_cast<std::size_t>(i));
}

/// Pairwise (cascade) summation in a fixed order. The result depends only on
/// the input values, never on how many threads produced them.
double pairwise_sum(std::span<const double> values);

}  // namespace adlab
