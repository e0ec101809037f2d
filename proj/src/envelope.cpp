#include "adlab/envelope.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <vector>
#include <cmath>
#include <stdexcept>

namespace adlab::envelope {

namespace {

// Below this distance from an endpoint psi differs from 0 or 1 by less than e^-98.
constexpr double kEdge = 0.01;

double integrate(auto&& f, double lo, double hi) {
  if (!(hi > lo)) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-15);
}

// Running integral of f over [0, 1]: exact cell sums on a uniform table,
// then a 20-point Gauss rule on the partial cell.
class CumulativeTable {
 public:
  static constexpr int kCells = 4096;

  explicit CumulativeTable(double (*f)(double)) : f_(f), sums_(kCells + 1, 0.0) {
    for (int i = 0; i < kCells; ++i)
      sums_[i + 1] = sums_[i] + boost::math::quadrature::gauss<double, 20>::integrate(
                                    f_, static_cast<double>(i) / kCells, static_cast<double>(i + 1) / kCells);
  }

  double operator()(double s) const {
    s = std::clamp(s, 0.0, 1.0);
    const int i = std::min(kCells - 1, static_cast<int>(s * kCells));
    const double lo = static_cast<double>(i) / kCells;
    if (!(s > lo)) return sums_[i];
    return sums_[i] + boost::math::quadrature::gauss<double, 20>::integrate(f_, lo, s);
  }

  double total() const { return sums_[kCells]; }

 private:
  double (*f_)(double);
  std::vector<double> sums_;
};

double psi_squared(double s);

const CumulativeTable& psi_table() {
  static const CumulativeTable t(&psi);
  return t;
}

const CumulativeTable& psi_squared_table() {
  static const CumulativeTable t(&psi_squared);
  return t;
}

// Taylor coefficients (not derivatives) of psi around s.
Jet psi_taylor(double s) {
  Jet c{};
  if (s <= kEdge) return c;
  if (s >= 1.0 - kEdge) {
    c[0] = 1.0;
    return c;
  }
  // psi = 1 / (1 + exp(phi)), phi = 1/s - 1/(1-s).
  Jet phi{};
  double ps = 1.0 / s, pm = 1.0 / (1.0 - s);
  double sign = 1.0;
  for (int k = 0; k <= kJetOrder; ++k) {
    phi[k] = sign * ps - pm;
    ps /= s;
    pm /= 1.0 - s;
    sign = -sign;
  }
  Jet e{};
  e[0] = std::exp(phi[0]);
  for (int k = 1; k <= kJetOrder; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += i * phi[i] * e[k - i];
    e[k] = acc / k;
  }
  Jet d = e;
  d[0] += 1.0;
  c[0] = 1.0 / d[0];
  for (int k = 1; k <= kJetOrder; ++k) {
    double acc = 0.0;
    for (int i = 1; i <= k; ++i) acc += d[i] * c[k - i];
    c[k] = -acc / d[0];
  }
  return c;
}

struct SupTable {
  std::array<double, kJetOrder + 1> sup{};
  SupTable() {
    constexpr int samples = 200000;
    for (int i = 1; i < samples; ++i) {
      const Jet j = psi_derivatives(static_cast<double>(i) / samples);
      for (int l = 0; l <= kJetOrder; ++l) sup[l] = std::max(sup[l], std::abs(j[l]));
    }
  }
};

}  // namespace

double psi(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double phi = 1.0 / s - 1.0 / (1.0 - s);
  if (phi > 700.0) return std::exp(-phi);
  return 1.0 / (1.0 + std::exp(phi));
}

namespace {
double psi_squared(double s) { return psi(s) * psi(s); }
}  // namespace

Jet psi_derivatives(double s) {
  Jet c = psi_taylor(s);
  double factorial = 1.0;
  for (int k = 1; k <= kJetOrder; ++k) {
    factorial *= k;
    c[k] *= factorial;
  }
  return c;
}

double psi_integral(double s) {
  s = std::clamp(s, 0.0, 1.0);
  // psi(s) + psi(1 - s) = 1 lets every evaluation integrate over at most [0, 1/2].
  if (s > 0.5) return s - 0.5 + psi_integral(1.0 - s);
  return psi_table()(s);
}

double psi_derivative_sup(int l) {
  if (l < 0 || l > kJetOrder) throw std::out_of_range("derivative order outside the jet");
  static const SupTable table;
  return table.sup[l];
}

Envelope::Envelope(double start, double width) : start_(start), width_(width) {
  if (!(width > 0.0)) throw std::invalid_argument("envelope width must be positive");
}

double Envelope::value(double t) const {
  if (t <= start_ || t >= end()) return 0.0;
  const double r = ramp();
  const double u = t - start_;
  if (u < r) return psi(u / r);
  const double v = end() - t;
  if (v < r) return psi(v / r);
  return 1.0;
}

Jet Envelope::derivatives(double t) const {
  Jet out{};
  if (t <= start_ || t >= end()) return out;
  const double r = ramp();
  const double u = t - start_;
  const double v = end() - t;
  if (u >= r && v >= r) {
    out[0] = 1.0;
    return out;
  }
  const bool rising = u < r;
  const Jet j = psi_derivatives(rising ? u / r : v / r);
  double scale = 1.0;
  for (int l = 0; l <= kJetOrder; ++l) {
    out[l] = (rising || l % 2 == 0 ? j[l] : -j[l]) * scale;
    scale /= r;
  }
  return out;
}

double Envelope::antiderivative(double t) const {
  const double r = ramp();
  if (t <= start_) return 0.0;
  if (t >= end()) return 0.75 * width_;
  const double u = t - start_;
  if (u <= r) return r * psi_integral(u / r);
  const double v = end() - t;
  if (v <= r) return 0.75 * width_ - r * psi_integral(v / r);
  return 0.5 * r + (u - r);
}

double Envelope::integral_squared(double ta, double tb) const {
  ta = std::max(ta, start_);
  tb = std::min(tb, end());
  if (!(tb > ta)) return 0.0;
  const double full = psi_squared_table().total();
  // int_0^s psi^2, in ramp units.
  auto partial = [](double s) { return psi_squared_table()(s); };
  const double r = ramp();
  // Antiderivative of chi^2 from the window start.
  auto F = [&](double t) {
    const double u = t - start_;
    if (u <= r) return r * partial(u / r);
    const double v = end() - t;
    if (v <= r) return 2.0 * r * full + (width_ - 2.0 * r) - r * partial(v / r);
    return r * full + (u - r);
  };
  return F(tb) - F(ta);
}

double Envelope::derivative_sup(int l) const {
  if (l == 0) return 1.0;
  return psi_derivative_sup(l) / std::pow(ramp(), l);
}

}  // namespace adlab::envelope
