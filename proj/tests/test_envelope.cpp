#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>

#include "adlab/envelope.hpp"

using namespace adlab::envelope;

TEST_CASE("psi is a symmetric smooth step") {
  CHECK(psi(-1.0) == 0.0);
  CHECK(psi(0.0) == 0.0);
  CHECK(psi(1.0) == 1.0);
  CHECK(psi(0.5) == doctest::Approx(0.5));
  for (double s : {0.02, 0.1, 0.3, 0.45}) CHECK(psi(s) + psi(1.0 - s) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("running integral of psi against tanh-sinh quadrature") {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (double s : {0.05, 0.2, 0.37, 0.5, 0.61, 0.9, 1.0}) {
    const double oracle = ts.integrate([](double x) { return psi(x); }, 0.0, s);
    CHECK(std::abs(psi_integral(s) - oracle) <= 1e-14);
  }
  CHECK(psi_integral(1.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("jets match finite differences") {
  const double h = 1e-4;
  for (double s : {0.2, 0.5, 0.73}) {
    const Jet j = psi_derivatives(s);
    const Jet jp = psi_derivatives(s + h), jm = psi_derivatives(s - h);
    CHECK(j[0] == doctest::Approx(psi(s)).epsilon(1e-14));
    for (int l = 0; l < kJetOrder; ++l) {
      const double fd = (jp[l] - jm[l]) / (2.0 * h);
      CHECK(fd == doctest::Approx(j[l + 1]).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("jets vanish near the ends") {
  for (double v : psi_derivatives(0.005)) CHECK(v == 0.0);
  const Jet top = psi_derivatives(0.995);
  CHECK(top[0] == 1.0);
  for (int l = 1; l <= kJetOrder; ++l) CHECK(top[l] == 0.0);
}

TEST_CASE("envelope plateau, ramps and integrals") {
  const Envelope e(0.3, 0.08);
  CHECK(e.value(0.3) == 0.0);
  CHECK(e.value(0.38) == 0.0);
  CHECK(e.value(0.34) == 1.0);
  CHECK(e.value(0.32) == 1.0);
  CHECK(e.value(0.31) == doctest::Approx(0.5));
  CHECK(e.integral(0.0, 1.0) == doctest::Approx(0.75 * 0.08).epsilon(1e-14));
  CHECK(e.integral(0.3, 0.34) == doctest::Approx(0.5 * 0.75 * 0.08).epsilon(1e-14));

  boost::math::quadrature::tanh_sinh<double> ts;
  auto sq = [&](double t) { return e.value(t) * e.value(t); };
  for (auto [a, b] : {std::pair{0.3, 0.38}, {0.305, 0.315}, {0.31, 0.376}, {0.35, 0.37}}) {
    double oracle = 0.0;
    // Split at the ramp ends so the quadrature sees smooth pieces.
    double cuts[] = {a, 0.32, 0.36, b};
    for (int i = 0; i < 3; ++i) {
      const double lo = std::max(a, cuts[i]), hi = std::min(b, cuts[i + 1]);
      if (hi > lo) oracle += ts.integrate(sq, lo, hi);
    }
    CHECK(std::abs(e.integral_squared(a, b) - oracle) <= 1e-14);
  }
}

TEST_CASE("envelope derivative bound scales with the ramp") {
  const Envelope e(0.0, 0.4);
  for (int l = 1; l <= 3; ++l) {
    double measured = 0.0;
    for (int i = 0; i <= 20000; ++i) measured = std::max(measured, std::abs(e.derivatives(0.4 * i / 20000.0)[l]));
    CHECK(measured <= e.derivative_sup(l) * (1.0 + 1e-9));
    CHECK(measured >= 0.99 * e.derivative_sup(l));
  }
}
