#include "adlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "adlab/parallel.hpp"

namespace adlab::norms {

namespace {

struct Offset {
  int d1;
  int d2;
  double weight;  ///< 1 / distance^alpha
};

std::vector<Offset> dyadic_offsets(int n, double alpha, bool two_d) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("Hoelder exponent must lie in (0, 1]");
  std::vector<Offset> out;
  for (int s = 1; 4 * s <= n; s *= 2) {
    const double axis = static_cast<double>(s) / n;
    out.push_back({s, 0, 1.0 / std::pow(axis, alpha)});
    if (!two_d) continue;
    out.push_back({0, s, 1.0 / std::pow(axis, alpha)});
    const double diag = std::sqrt(2.0) * axis;
    if (diag <= 0.25) out.push_back({s, s, 1.0 / std::pow(diag, alpha)});
  }
  return out;
}

}  // namespace

const char* to_string(Kind k) {
  switch (k) {
    case Kind::Linf: return "Linf";
    case Kind::Calpha: return "Calpha";
    case Kind::L3Calpha: return "L3Calpha";
    case Kind::L1sCsigma: return "L1sCsigma";
    case Kind::CalphaSpaceTime: return "CalphaSpaceTime";
    case Kind::L2gap: return "L2gap";
    case Kind::Dissipation: return "Dissipation";
  }
  return "?";
}

Kind kind_from_string(const std::string& tag) {
  for (Kind k : {Kind::Linf, Kind::Calpha, Kind::L3Calpha, Kind::L1sCsigma, Kind::CalphaSpaceTime, Kind::L2gap,
                 Kind::Dissipation})
    if (tag == to_string(k)) return k;
  throw std::invalid_argument("unknown norm kind: " + tag);
}

double holder_seminorm(const ScalarField& f, double alpha) {
  const int n = f.n();
  const std::vector<Offset> offsets = dyadic_offsets(n, alpha, true);
  std::vector<double> row_max(static_cast<std::size_t>(n), 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t r) {
    const int j2 = static_cast<int>(r);
    double m = 0.0;
    for (const auto& o : offsets) {
      const int k2 = (j2 + o.d2) % n;
      for (int j1 = 0; j1 < n; ++j1) {
        const int k1 = (j1 + o.d1) % n;
        m = std::max(m, std::abs(f.at(k1, k2) - f.at(j1, j2)) * o.weight);
      }
    }
    row_max[r] = m;
  });
  return row_max.empty() ? 0.0 : *std::max_element(row_max.begin(), row_max.end());
}

double holder_seminorm_1d(std::span<const double> values, double alpha) {
  const int n = static_cast<int>(values.size());
  double m = 0.0;
  for (const auto& o : dyadic_offsets(n, alpha, false))
    for (int j = 0; j < n; ++j) m = std::max(m, std::abs(values[static_cast<std::size_t>((j + o.d1) % n)] - values[static_cast<std::size_t>(j)]) * o.weight);
  return m;
}

double holder_seminorm(std::span<const ScalarField* const> components, double alpha) {
  double m = 0.0;
  for (const ScalarField* c : components) m = std::max(m, holder_seminorm(*c, alpha));
  return m;
}

double calpha_norm(const ScalarField& f, double alpha) { return f.linf() + holder_seminorm(f, alpha); }

double calpha_norm_1d(std::span<const double> values, double alpha) {
  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v));
  return sup + holder_seminorm_1d(values, alpha);
}

ScalarField subsample(const ScalarField& f) {
  const int n = f.n() / 2;
  ScalarField out(n);
  for (int j2 = 0; j2 < n; ++j2)
    for (int j1 = 0; j1 < n; ++j1) out.at(j1, j2) = f.at(2 * j1, 2 * j2);
  return out;
}

double refinement_ratio(const ScalarField& f, double alpha) {
  const double coarse = holder_seminorm(subsample(f), alpha);
  if (coarse == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return holder_seminorm(f, alpha) / coarse;
}

std::vector<double> trapezoid_weights(std::span<const double> times) {
  const std::size_t m = times.size();
  std::vector<double> w(m, 0.0);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double h = times[i + 1] - times[i];
    if (h < 0.0) throw std::invalid_argument("quadrature nodes must be nondecreasing");
    w[i] += 0.5 * h;
    w[i + 1] += 0.5 * h;
  }
  return w;
}

double bochner_norm(std::span<const double> times, std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("Bochner exponent must be >= 1");
  if (times.size() != values.size()) throw std::invalid_argument("times and values differ in length");
  const std::vector<double> w = trapezoid_weights(times);
  std::vector<double> terms(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) terms[i] = w[i] * std::pow(std::abs(values[i]), p);
  return std::pow(pairwise_sum(terms), 1.0 / p);
}

Uniformity uniformity_scan(std::span<const double> nus, std::span<const double> values) {
  if (nus.size() != values.size()) throw std::invalid_argument("nu list and values differ in length");
  Uniformity u;
  double running = 0.0;
  for (std::size_t i = 0; i < nus.size(); ++i) {
    running = std::max(running, values[i]);
    u.rows.push_back({nus[i], values[i], running});
  }
  if (values.empty()) return u;
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  u.median = m % 2 == 1 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  u.max = sorted.back();
  u.ratio = u.median > 0.0 ? u.max / u.median : std::numeric_limits<double>::infinity();
  return u;
}

double force_slice_csigma(const lift::LiftedForce& f, double t, int n, double sigma) {
  const shear::ProfileSample s = f.sample(t, n);
  if (!s.active) return 0.0;
  return calpha_norm_1d(s.values, sigma);
}

ForceNorms force_norm(const lift::LiftedForce& f, std::span<const double> times, int n, double sigma,
                      double alpha_prime) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");
  ForceNorms out;
  std::vector<shear::ProfileSample> slices;
  std::vector<double> per_slice;
  double sup = 0.0, spatial = 0.0;
  for (double t : times) {
    slices.push_back(f.sample(t, n));
    const auto& s = slices.back();
    per_slice.push_back(s.active ? calpha_norm_1d(s.values, sigma) : 0.0);
    if (s.active) {
      for (double v : s.values) sup = std::max(sup, std::abs(v));
      spatial = std::max(spatial, holder_seminorm_1d(s.values, alpha_prime));
    }
  }
  out.bochner = bochner_norm(times, per_slice, 1.0 + sigma);

  auto slice_sup = [](const shear::ProfileSample& s) {
    double m = 0.0;
    for (double v : s.values) m = std::max(m, std::abs(v));
    return m;
  };
  double temporal = 0.0;
  const std::size_t m = times.size();
  for (std::size_t step = 1; step < m; step *= 2) {
    for (std::size_t i = 0; i + step < m; ++i) {
      const double dt = times[i + step] - times[i];
      if (!(dt > 0.0)) continue;
      const auto& a = slices[i];
      const auto& b = slices[i + step];
      double diff = 0.0;
      if (a.active && b.active && a.direction == b.direction) {
        for (std::size_t j = 0; j < a.values.size(); ++j) diff = std::max(diff, std::abs(a.values[j] - b.values[j]));
      } else {
        diff = std::max(a.active ? slice_sup(a) : 0.0, b.active ? slice_sup(b) : 0.0);
      }
      temporal = std::max(temporal, diff / std::pow(dt, alpha_prime));
    }
  }
  out.spacetime = sup + spatial + temporal;
  return out;
}

double spacetime_holder(std::span<const double> times, std::span<const ScalarField> slices, double alpha) {
  if (times.size() != slices.size()) throw std::invalid_argument("times and slices differ in length");
  double sup = 0.0, spatial = 0.0, temporal = 0.0;
  for (const auto& s : slices) {
    sup = std::max(sup, s.linf());
    spatial = std::max(spatial, holder_seminorm(s, alpha));
  }
  const std::size_t m = times.size();
  for (std::size_t step = 1; step < m; step *= 2) {
    for (std::size_t i = 0; i + step < m; ++i) {
      const double dt = times[i + step] - times[i];
      if (!(dt > 0.0)) continue;
      double diff = 0.0;
      const auto& a = slices[i].values();
      const auto& b = slices[i + step].values();
      for (std::size_t j = 0; j < a.size(); ++j) diff = std::max(diff, std::abs(a[j] - b[j]));
      temporal = std::max(temporal, diff / std::pow(dt, alpha));
    }
  }
  return sup + spatial + temporal;
}

double energy_balance_check(const lift::LiftedSolution& v) {
  const auto checks = lift::energy_inequality(v);
  const solver::Trajectory& traj = *v.theta;
  double worst = 0.0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const double dissipated = traj.cumulative(i) + 2.0 * lift::u_dissipation(v.u, v.nu, traj.times[i]);
    worst = std::max(worst, std::abs(checks[i].lhs + dissipated - checks[i].rhs) / traj.initial_l2_squared);
  }
  return worst;
}

}  // namespace adlab::norms
