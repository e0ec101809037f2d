#include "adlab/nslift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace adlab::lift {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wave(const shear::ShearStage& st, double x1, double x2) {
  const double y = st.direction == shear::Direction::Horizontal ? x2 : x1;
  return std::sin(kTwoPi * st.mode * y);
}
}  // namespace

LiftedSolution lift(const shear::TruncatedField& u, const solver::Trajectory& theta, double nu) {
  if (theta.q_cut != u.q_cut) throw std::invalid_argument("trajectory was solved with a different truncation");
  if (theta.nu != nu) throw std::invalid_argument("trajectory was solved with a different viscosity");
  LiftedSolution v;
  v.u = u;
  v.theta = &theta;
  v.nu = nu;
  const auto& seq = u.schedule->sequences;
  v.q_of_nu = nu == 0.0 ? seq.depth() : seq.truncation_level(nu);
  v.level_matches = v.q_of_nu == u.q_cut;
  return v;
}

double LiftedForce::coefficient(double t) const {
  const shear::ShearStage* st = u.active(t);
  if (st == nullptr) return 0.0;
  const envelope::Jet j = st->envelope_derivatives(t);
  const double k = kTwoPi * st->mode;
  return st->sign * st->amplitude * (j[1] + nu * k * k * j[0]);
}

std::array<double, 3> LiftedForce::at(double t, double x1, double x2) const {
  const shear::ShearStage* st = u.active(t);
  if (st == nullptr) return {0.0, 0.0, 0.0};
  const double v = coefficient(t) * wave(*st, x1, x2);
  if (st->direction == shear::Direction::Horizontal) return {v, 0.0, 0.0};
  return {0.0, v, 0.0};
}

shear::ProfileSample LiftedForce::sample(double t, int n) const {
  shear::ProfileSample out = shear::sample_velocity(u, t, n);
  if (!out.active) return out;
  const shear::ShearStage* st = u.active(t);
  const double c = coefficient(t);
  const long long nn = n;
  for (long long j = 0; j < nn; ++j) {
    const long long idx = (static_cast<long long>(st->mode) * j) % nn;
    out.values[static_cast<std::size_t>(j)] = c * std::sin(kTwoPi * static_cast<double>(idx) / static_cast<double>(nn));
  }
  return out;
}

LiftedForce force(const shear::TruncatedField& u, double nu) { return {u, nu}; }

std::array<double, 3> velocity_at(const shear::TruncatedField& u, double t, double x1, double x2) {
  const shear::ShearStage* st = u.active(t);
  if (st == nullptr) return {0.0, 0.0, 0.0};
  const double v = st->sign * st->amplitude * st->envelope_value(t) * wave(*st, x1, x2);
  if (st->direction == shear::Direction::Horizontal) return {v, 0.0, 0.0};
  return {0.0, v, 0.0};
}

ResidualReport ns_residual(const LiftedSolution& v, const LiftedForce& f, std::size_t center, int samples,
                           std::uint64_t seed) {
  const solver::Trajectory& traj = *v.theta;
  if (f.nu != v.nu || f.u.q_cut != v.u.q_cut) throw std::invalid_argument("force and solution disagree on (q, nu)");
  if (center == 0 || center + 1 >= traj.fields.size())
    throw std::invalid_argument("ns_residual needs stored checkpoints on both sides of the center");
  const double t = traj.times[center];
  const double h = t - traj.times[center - 1];
  if (std::abs((traj.times[center + 1] - t) - h) > 1e-9 * h)
    throw std::invalid_argument("ns_residual needs equally spaced checkpoints");

  const int n = traj.n;
  const ScalarField& theta = traj.fields[center];
  const Spectrum spec = forward(theta);
  const ScalarField d1 = derivative(spec, 0);
  const ScalarField d2 = derivative(spec, 1);
  const ScalarField lap = laplacian(spec);
  const ScalarField& before = traj.fields[center - 1];
  const ScalarField& after = traj.fields[center + 1];

  const shear::ShearStage* st = v.u.active(t);
  envelope::Jet jet{};
  if (st != nullptr) jet = st->envelope_derivatives(t);

  ResidualReport rep;
  rep.t = t;
  rep.h = h;
  rep.dt = traj.max_dt;
  rep.n = n;
  rep.nu = v.nu;
  rep.samples = samples;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int s = 0; s < samples; ++s) {
    const int j1 = pick(rng), j2 = pick(rng);
    const double x1 = static_cast<double>(j1) / n, x2 = static_cast<double>(j2) / n;
    std::array<double, 3> vel = velocity_at(v.u, t, x1, x2);
    std::array<double, 3> dt_u{}, lap_u{}, adv_u{};
    if (st != nullptr) {
      const int axis = st->direction == shear::Direction::Horizontal ? 0 : 1;
      const double k = kTwoPi * st->mode;
      const double w = wave(*st, x1, x2);
      const double c = st->sign * st->amplitude;
      dt_u[axis] = c * jet[1] * w;
      lap_u[axis] = -k * k * c * jet[0] * w;
      // The active component only varies across the shear, where the velocity is zero.
      const double y = axis == 0 ? x2 : x1;
      const double cross = c * jet[0] * k * std::cos(k * y);
      adv_u[axis] = vel[1 - axis] * cross;
    }
    const std::array<double, 3> F = f.at(t, x1, x2);
    for (int c = 0; c < 2; ++c) {
      const double r = dt_u[c] + adv_u[c] - v.nu * lap_u[c] - F[c];
      rep.component_residuals[c] = std::max(rep.component_residuals[c], std::abs(r));
    }
    const double dtheta = (after.at(j1, j2) - before.at(j1, j2)) / (2.0 * h);
    const double r3 = dtheta + vel[0] * d1.at(j1, j2) + vel[1] * d2.at(j1, j2) - v.nu * lap.at(j1, j2) - F[2];
    rep.component_residuals[2] = std::max(rep.component_residuals[2], std::abs(r3));
  }
  return rep;
}

Probe residual_probe(const shear::TruncatedField& u, double nu, const solver::DtPolicy& dt) {
  const shear::ShearStage* finest = nullptr;
  for (const auto* st : u.stages())
    if (!st->mirrored && (finest == nullptr || st->level >= finest->level)) finest = st;
  if (finest == nullptr) return {0.5, 1.0 / dt.steps_per_window};
  return {finest->window.lo + 0.5 * finest->chi.ramp(), dt.stage_dt(*finest, nu)};
}

ResidualReport residual_run(const shear::TruncatedField& u, double nu, int n, const solver::DtPolicy& dt, int samples,
                            std::uint64_t seed) {
  const Probe p = residual_probe(u, nu, dt);
  solver::SolveOptions opt;
  opt.nu = nu;
  opt.n = n;
  opt.dt = dt;
  opt.checkpoints = {p.t - p.h, p.t, p.t + p.h};
  opt.store_fields = true;
  const solver::Trajectory traj = solver::solve(u, opt);
  const LiftedSolution v = lift(u, traj, nu);
  return ns_residual(v, force(u, nu), 1, samples, seed);
}

double u_dissipation(const shear::TruncatedField& u, double nu, double t) {
  if (nu == 0.0) return 0.0;
  double total = 0.0;
  for (const auto* st : u.stages()) {
    if (st->window.lo >= t) continue;
    const double k = kTwoPi * st->mode;
    total += 0.5 * st->amplitude * st->amplitude * k * k * st->envelope_integral_squared(st->window.lo, t);
  }
  return nu * total;
}

Dissipation3D dissipation_3d(const LiftedSolution& v, std::size_t index) {
  const solver::Trajectory& traj = *v.theta;
  Dissipation3D d;
  d.theta_part = 0.5 * traj.cumulative(index);
  d.u_part = u_dissipation(v.u, v.nu, traj.times[index]);
  d.total = d.theta_part + d.u_part;
  return d;
}

std::vector<EnergyCheck> energy_inequality(const LiftedSolution& v, double tol) {
  const solver::Trajectory& traj = *v.theta;
  std::vector<EnergyCheck> out;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    EnergyCheck e;
    e.t = t;
    double u_energy = 0.0;
    const shear::ShearStage* now = v.u.active(t);
    if (now != nullptr) {
      const double a = now->amplitude * now->envelope_value(t);
      u_energy = 0.5 * a * a;
    }
    e.lhs = u_energy + traj.stats[i].l2 * traj.stats[i].l2;
    // 2 int_0^t int F.u = sum over stages of A^2 [chi^2 / 2 + nu k^2 int chi^2] (chi vanishes at window starts).
    double work = 0.0;
    for (const auto* st : v.u.stages()) {
      if (st->window.lo >= t) continue;
      const double k = kTwoPi * st->mode;
      const double chi_end = st->envelope_value(std::min(t, st->window.hi));
      const double a2 = st->amplitude * st->amplitude;
      work += a2 * (0.5 * chi_end * chi_end + v.nu * k * k * st->envelope_integral_squared(st->window.lo, t));
    }
    e.rhs = traj.initial_l2_squared + work;
    e.ok = e.lhs <= e.rhs * (1.0 + tol);
    out.push_back(e);
  }
  return out;
}

double sup_norm(const LiftedSolution& v) {
  const solver::Trajectory& traj = *v.theta;
  double m = 0.0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const shear::ShearStage* st = v.u.active(traj.times[i]);
    const double u_sup = st == nullptr ? 0.0 : st->amplitude * st->envelope_value(traj.times[i]);
    m = std::max({m, u_sup, traj.stats[i].linf});
  }
  return m;
}

LiftedStepper::LiftedStepper(const shear::TruncatedField& u, double nu, int n, solver::DtPolicy dt, int datum_mode)
    : u_(u), third_(u, nu, solver::initial_datum(n, datum_mode), dt) {}

}  // namespace adlab::lift
