#include "adlab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace adlab::fft {

namespace {

enum Slot { RowR2C, RowC2R, ColR2C, ColC2R, HalfFwd, HalfBwd, ContFwd, ContBwd };

constexpr unsigned kFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

std::unique_ptr<LinePlans> make_plans(int n) {
  auto lp = std::make_unique<LinePlans>();
  lp->n = n;
  lp->half = n / 2 + 1;
  const int h = lp->half;
  std::vector<double> real(static_cast<std::size_t>(n) * n);
  std::vector<cplx> spec(static_cast<std::size_t>(n) * n);
  double* r = real.data();
  fftw_complex* c = as_fftw(spec.data());
  int len = n;

  lp->plans[RowR2C] = fftw_plan_many_dft_r2c(1, &len, 1, r, nullptr, 1, 0, c, nullptr, 1, 0, kFlags);
  lp->plans[RowC2R] = fftw_plan_many_dft_c2r(1, &len, 1, c, nullptr, 1, 0, r, nullptr, 1, 0, kFlags);
  lp->plans[ColR2C] = fftw_plan_many_dft_r2c(1, &len, 1, r, nullptr, n, 0, c, nullptr, n, 0, kFlags);
  lp->plans[ColC2R] = fftw_plan_many_dft_c2r(1, &len, 1, c, nullptr, n, 0, r, nullptr, n, 0, kFlags);
  lp->plans[HalfFwd] = fftw_plan_many_dft(1, &len, 1, c, nullptr, h, 0, c, nullptr, h, 0, FFTW_FORWARD, kFlags);
  lp->plans[HalfBwd] = fftw_plan_many_dft(1, &len, 1, c, nullptr, h, 0, c, nullptr, h, 0, FFTW_BACKWARD, kFlags);
  lp->plans[ContFwd] = fftw_plan_many_dft(1, &len, 1, c, nullptr, 1, 0, c, nullptr, 1, 0, FFTW_FORWARD, kFlags);
  lp->plans[ContBwd] = fftw_plan_many_dft(1, &len, 1, c, nullptr, 1, 0, c, nullptr, 1, 0, FFTW_BACKWARD, kFlags);
  for (void* p : lp->plans)
    if (p == nullptr) throw std::runtime_error("FFTW could not plan a transform of size " + std::to_string(n));
  return lp;
}

fftw_plan get(const LinePlans& lp, Slot s) { return static_cast<fftw_plan>(lp.plans[s]); }

}  // namespace

void LinePlans::row_r2c(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(get(*this, RowR2C), const_cast<double*>(in), as_fftw(out));
}

void LinePlans::row_c2r(cplx* in, double* out) const { fftw_execute_dft_c2r(get(*this, RowC2R), as_fftw(in), out); }

void LinePlans::col_r2c(const double* in, cplx* out) const {
  fftw_execute_dft_r2c(get(*this, ColR2C), const_cast<double*>(in), as_fftw(out));
}

void LinePlans::col_c2r(cplx* in, double* out) const { fftw_execute_dft_c2r(get(*this, ColC2R), as_fftw(in), out); }

void LinePlans::c2c_stride_half(cplx* data, int sign) const {
  fftw_execute_dft(get(*this, sign == kForward ? HalfFwd : HalfBwd), as_fftw(data), as_fftw(data));
}

void LinePlans::c2c_contiguous(cplx* data, int sign) const {
  fftw_execute_dft(get(*this, sign == kForward ? ContFwd : ContBwd), as_fftw(data), as_fftw(data));
}

const LinePlans& plans(int n) {
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("grid size must be a power of two >= 2");
  static std::map<int, std::unique_ptr<LinePlans>> cache;
  std::lock_guard<std::mutex> lock(planner_mutex());
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_plans(n)).first;
  return *it->second;
}

}  // namespace adlab::fft
