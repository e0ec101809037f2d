#pragma once

#include <functional>
#include <vector>

#include "adlab/fft.hpp"

namespace adlab {

/// Real samples on the uniform n x n torus grid, x = (j1 / n, j2 / n).
/// Storage is row-major with a row at fixed x2: values[j2 * n + j1].
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(int n);

  static ScalarField sample(int n, const std::function<double(double, double)>& f);

  int n() const { return n_; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  double& at(int j1, int j2) { return values_[static_cast<std::size_t>(j2) * n_ + j1]; }
  double at(int j1, int j2) const { return values_[static_cast<std::size_t>(j2) * n_ + j1]; }

  double mean() const;
  double l1() const;   ///< mean of |f|
  double l2() const;   ///< sqrt of the mean of f^2 (the torus has unit area)
  double linf() const;
  bool finite() const;

 private:
  int n_ = 0;
  std::vector<double> values_;
};

/// Unnormalized 2D DFT in half-spectrum layout data[k2 * (n/2 + 1) + k1].
struct Spectrum {
  int n = 0;
  std::vector<fft::cplx> data;

  int half() const { return n / 2 + 1; }
};

/// Signed frequency of index k on an axis of length n (Nyquist reported as +n/2).
inline int signed_frequency(int k, int n) { return k <= n / 2 ? k : k - n; }

/// Weight of a half-spectrum column in full-spectrum sums.
inline double half_weight(int k1, int n) { return (k1 == 0 || k1 == n / 2) ? 1.0 : 2.0; }

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Squared L2 norm of grad f on the unit torus, exact for the grid interpolant.
double gradient_l2_squared(const Spectrum& s);
/// Spectral partial derivative along axis 0 (x1) or 1 (x2); Nyquist dropped.
ScalarField derivative(const Spectrum& s, int axis);
ScalarField laplacian(const Spectrum& s);
/// max over the grid of |grad f|.
double gradient_linf(const Spectrum& s);

/// L2 distance on the unit torus. Throws std::invalid_argument on grid mismatch.
double l2_gap(const ScalarField& a, const ScalarField& b);

}  // namespace adlab
