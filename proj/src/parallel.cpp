#include "adlab/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace adlab {

namespace {
std::atomic<int> g_override{0};

int env_cap() {
  const char* raw = std::getenv("ADLAB_THREADS");
  if (raw == nullptr) return 0;
  try {
    const int v = std::stoi(raw);
    return v > 0 ? v : 0;
  } catch (...) {
    return 0;
  }
}
}  // namespace

int thread_count() {
  if (omp_in_parallel()) return 1;
  const int forced = g_override.load();
  if (forced > 0) return forced;
  int threads = omp_get_max_threads();
  const int cap = env_cap();
  if (cap > 0 && cap < threads) threads = cap;
  return threads < 1 ? 1 : threads;
}

void set_thread_count(int threads) { g_override.store(threads > 0 ? threads : 0); }

double pairwise_sum(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace adlab
