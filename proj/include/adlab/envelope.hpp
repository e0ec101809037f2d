#pragma once

#include <array>

namespace adlab::envelope {

/// Highest derivative order carried by the jets below.
inline constexpr int kJetOrder = 6;
using Jet = std::array<double, kJetOrder + 1>;

/// C-infinity step: 0 for s <= 0, 1 for s >= 1,
/// psi(s) = e^{-1/s} / (e^{-1/s} + e^{-1/(1-s)}) in between.
double psi(double s);

/// psi and its first kJetOrder derivatives at s.
Jet psi_derivatives(double s);

/// Integral of psi over [0, s], s in [0, 1].
double psi_integral(double s);

/// sup over [0, 1] of |psi^(l)|, l <= kJetOrder (measured once on a fine grid).
double psi_derivative_sup(int l);

/// Plateau cutoff on [start, start + width]: rises on the first quarter,
/// equals one on the middle half, falls on the last quarter. Vanishes to
/// all orders outside the open window.
class Envelope {
 public:
  Envelope() = default;
  Envelope(double start, double width);

  double start() const { return start_; }
  double width() const { return width_; }
  double end() const { return start_ + width_; }
  double ramp() const { return 0.25 * width_; }

  double value(double t) const;
  /// chi^(l)(t) for l = 0..kJetOrder.
  Jet derivatives(double t) const;

  /// Integral of chi over [start, t] (clamped to the window).
  double antiderivative(double t) const;
  /// Integral of chi over [ta, tb].
  double integral(double ta, double tb) const { return antiderivative(tb) - antiderivative(ta); }
  /// Integral of chi^2 over [ta, tb].
  double integral_squared(double ta, double tb) const;

  /// sup |chi^(l)| = psi_derivative_sup(l) / ramp^l for l >= 1, and 1 for l = 0.
  double derivative_sup(int l) const;

 private:
  double start_ = 0.0;
  double width_ = 0.0;
};

}  // namespace adlab::envelope
