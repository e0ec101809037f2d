#pragma once

#include <complex>

namespace adlab::fft {

using cplx = std::complex<double>;

/// Single 1D transforms of length n planned once per (n, strides) and
/// executed on any array with the same strides. Plans are unaligned, so the
/// arithmetic performed for a given line never depends on where it lives in
/// memory or which thread runs it.
struct LinePlans {
  int n = 0;
  int half = 0;  ///< n / 2 + 1

  // Real grid f[j2 * n + j1] (a row is fixed x2).
  void row_r2c(const double* in, cplx* out) const;  ///< contiguous row -> half row
  void row_c2r(cplx* in, double* out) const;        ///< destroys in
  void col_r2c(const double* in, cplx* out) const;  ///< column (stride n) -> stride-n half column
  void col_c2r(cplx* in, double* out) const;        ///< stride-n half column -> column; destroys in

  // Complex lines.
  void c2c_stride_half(cplx* data, int sign) const;  ///< length n, stride n/2 + 1, in place
  void c2c_contiguous(cplx* data, int sign) const;   ///< length n, stride 1, in place

  void* plans[8] = {};
};

/// Shared plans for grid size n (a power of two >= 2). Thread-safe.
const LinePlans& plans(int n);

inline constexpr int kForward = -1;
inline constexpr int kBackward = 1;

}  // namespace adlab::fft
