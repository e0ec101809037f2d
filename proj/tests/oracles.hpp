#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. None of them calls the code paths they check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "adlab/scalar_field.hpp"
#include "adlab/shearflow.hpp"

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// Band-limited test field with several x1 and x2 modes.
inline double smooth_field(double x1, double x2) {
  return std::sin(2.0 * kPi * (x1 + 2.0 * x2)) + 0.5 * std::cos(2.0 * kPi * 3.0 * x1) +
         0.25 * std::sin(2.0 * kPi * (5.0 * x2 - x1));
}

/// Velocity of a single stage, evaluated from its envelope value only.
inline void stage_velocity(const adlab::shear::ShearStage& st, double t, double x1, double x2, double& u1,
                           double& u2) {
  const double w = st.sign * st.amplitude * st.envelope_value(t);
  if (st.direction == adlab::shear::Direction::Horizontal) {
    u1 = w * std::sin(2.0 * kPi * st.mode * x2);
    u2 = 0.0;
  } else {
    u1 = 0.0;
    u2 = w * std::sin(2.0 * kPi * st.mode * x1);
  }
}

/// Max error of `advected` (the field `smooth_field` transported by `st` over
/// [t0, t0 + dt]) at `count` random grid points, each traced back along its
/// characteristic with classical RK4.
inline double backtracking_error(const adlab::ScalarField& advected, const adlab::shear::ShearStage& st, double t0,
                                 double dt, int count, unsigned seed = 11, int substeps = 4000) {
  const int n = advected.n();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  double worst = 0.0;
  const double h = -dt / substeps;
  for (int c = 0; c < count; ++c) {
    const int j1 = pick(rng), j2 = pick(rng);
    double x1 = static_cast<double>(j1) / n, x2 = static_cast<double>(j2) / n, t = t0 + dt;
    for (int s = 0; s < substeps; ++s) {
      double a1, a2, b1, b2, c1, c2, d1, d2;
      stage_velocity(st, t, x1, x2, a1, a2);
      stage_velocity(st, t + 0.5 * h, x1 + 0.5 * h * a1, x2 + 0.5 * h * a2, b1, b2);
      stage_velocity(st, t + 0.5 * h, x1 + 0.5 * h * b1, x2 + 0.5 * h * b2, c1, c2);
      stage_velocity(st, t + h, x1 + h * c1, x2 + h * c2, d1, d2);
      x1 += h / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1);
      x2 += h / 6.0 * (a2 + 2.0 * b2 + 2.0 * c2 + d2);
      t += h;
    }
    worst = std::max(worst, std::abs(advected.at(j1, j2) - smooth_field(x1, x2)));
  }
  return worst;
}

/// Torus distance between grid offsets (d1, d2) on an n-grid.
inline double torus_distance(int d1, int d2, int n) {
  const int a = std::min(std::abs(d1) % n, n - std::abs(d1) % n);
  const int b = std::min(std::abs(d2) % n, n - std::abs(d2) % n);
  return std::hypot(static_cast<double>(a), static_cast<double>(b)) / n;
}

/// Hoelder quotient over every pair of grid points at torus distance in (0, 1/4].
inline double exhaustive_holder(const adlab::ScalarField& f, double alpha) {
  const int n = f.n();
  double best = 0.0;
  for (int d2 = 0; d2 < n; ++d2)
    for (int d1 = 0; d1 < n; ++d1) {
      const double d = torus_distance(d1, d2, n);
      if (d == 0.0 || d > 0.25) continue;
      const double scale = std::pow(d, -alpha);
      for (int j2 = 0; j2 < n; ++j2)
        for (int j1 = 0; j1 < n; ++j1) {
          const double diff = std::abs(f.at(j1, j2) - f.at((j1 + d1) % n, (j2 + d2) % n));
          best = std::max(best, diff * scale);
        }
    }
  return best;
}

/// 2 pi^2 int_0^1 (1 - e^{-4 pi^2 t})^2 dt, expanded by hand.
inline double heat_closed_form() {
  const double c = 4.0 * kPi * kPi;
  // int (1 - 2 e^{-ct} + e^{-2ct}) = 1 - 2 (1 - e^{-c}) / c + (1 - e^{-2c}) / (2c)
  return 2.0 * kPi * kPi * (1.0 - 2.0 * (1.0 - std::exp(-c)) / c + (1.0 - std::exp(-2.0 * c)) / (2.0 * c));
}

}  // namespace oracle
