#include "adlab/scalar_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "adlab/parallel.hpp"

namespace adlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Fixed-order reduction: one partial per row, then a pairwise sum.
template <class RowFn>
double row_sum(int rows, RowFn&& fn) {
  std::vector<double> partial(static_cast<std::size_t>(rows));
  parallel_for(partial.size(), [&](std::size_t r) { partial[r] = fn(static_cast<int>(r)); });
  return pairwise_sum(partial);
}

}  // namespace

ScalarField::ScalarField(int n) : n_(n), values_(static_cast<std::size_t>(n) * n, 0.0) {
  if (n < 1) throw std::invalid_argument("grid size must be positive");
}

ScalarField ScalarField::sample(int n, const std::function<double(double, double)>& f) {
  ScalarField out(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j2) {
    for (int j1 = 0; j1 < n; ++j1)
      out.at(j1, static_cast<int>(j2)) = f(static_cast<double>(j1) / n, static_cast<double>(j2) / n);
  });
  return out;
}

double ScalarField::mean() const {
  return row_sum(n_, [&](int r) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += at(j, r);
    return s;
  }) / (static_cast<double>(n_) * n_);
}

double ScalarField::l1() const {
  return row_sum(n_, [&](int r) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += std::abs(at(j, r));
    return s;
  }) / (static_cast<double>(n_) * n_);
}

double ScalarField::l2() const {
  return std::sqrt(row_sum(n_, [&](int r) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += at(j, r) * at(j, r);
    return s;
  }) / (static_cast<double>(n_) * n_));
}

double ScalarField::linf() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool ScalarField::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Spectrum forward(const ScalarField& f) {
  const int n = f.n();
  const auto& p = fft::plans(n);
  Spectrum s;
  s.n = n;
  const int h = s.half();
  s.data.assign(static_cast<std::size_t>(n) * h, fft::cplx{});
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j2) {
    p.row_r2c(f.values().data() + j2 * n, s.data.data() + j2 * h);
  });
  parallel_for(static_cast<std::size_t>(h),
               [&](std::size_t k1) { p.c2c_stride_half(s.data.data() + k1, fft::kForward); });
  return s;
}

ScalarField inverse(const Spectrum& s) {
  const int n = s.n;
  const int h = s.half();
  const auto& p = fft::plans(n);
  std::vector<fft::cplx> work = s.data;
  parallel_for(static_cast<std::size_t>(h), [&](std::size_t k1) { p.c2c_stride_half(work.data() + k1, fft::kBackward); });
  ScalarField out(n);
  const double scale = 1.0 / (static_cast<double>(n) * n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j2) {
    double* row = out.values().data() + j2 * n;
    p.row_c2r(work.data() + j2 * h, row);
    for (int j = 0; j < n; ++j) row[j] *= scale;
  });
  return out;
}

double gradient_l2_squared(const Spectrum& s) {
  const int n = s.n, h = s.half();
  const double norm = 1.0 / (static_cast<double>(n) * n * n * n);
  return kTwoPi * kTwoPi * norm * row_sum(n, [&](int k2) {
    const double f2 = signed_frequency(k2, n);
    double acc = 0.0;
    for (int k1 = 0; k1 < h; ++k1)
      acc += half_weight(k1, n) * (k1 * static_cast<double>(k1) + f2 * f2) * std::norm(s.data[static_cast<std::size_t>(k2) * h + k1]);
    return acc;
  });
}

ScalarField derivative(const Spectrum& s, int axis) {
  if (axis != 0 && axis != 1) throw std::invalid_argument("axis must be 0 or 1");
  const int n = s.n, h = s.half();
  Spectrum d = s;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t k2) {
    for (int k1 = 0; k1 < h; ++k1) {
      int k = axis == 0 ? k1 : signed_frequency(static_cast<int>(k2), n);
      if (2 * std::abs(k) == n) k = 0;
      d.data[k2 * h + k1] *= fft::cplx(0.0, kTwoPi * k);
    }
  });
  return inverse(d);
}

ScalarField laplacian(const Spectrum& s) {
  const int n = s.n, h = s.half();
  Spectrum d = s;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t k2) {
    const double f2 = signed_frequency(static_cast<int>(k2), n);
    for (int k1 = 0; k1 < h; ++k1) d.data[k2 * h + k1] *= -kTwoPi * kTwoPi * (k1 * static_cast<double>(k1) + f2 * f2);
  });
  return inverse(d);
}

double gradient_linf(const Spectrum& s) {
  const ScalarField dx = derivative(s, 0);
  const ScalarField dy = derivative(s, 1);
  double m = 0.0;
  for (std::size_t i = 0; i < dx.values().size(); ++i) m = std::max(m, std::hypot(dx.values()[i], dy.values()[i]));
  return m;
}

double l2_gap(const ScalarField& a, const ScalarField& b) {
  if (a.n() != b.n()) throw std::invalid_argument("l2_gap: grid mismatch");
  ScalarField d(a.n());
  for (std::size_t i = 0; i < d.values().size(); ++i) d.values()[i] = a.values()[i] - b.values()[i];
  return d.l2();
}

}  // namespace adlab
