#include "adlab/scalarsolver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "adlab/errors.hpp"
#include "adlab/parallel.hpp"

namespace adlab::solver {

namespace {

using fft::cplx;
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// sin(2 pi mode j / n) with the argument reduced exactly on the grid.
std::vector<double> grid_sine(int mode, int n) {
  std::vector<double> s(static_cast<std::size_t>(n));
  const long long nn = n;
  for (long long j = 0; j < nn; ++j)
    s[static_cast<std::size_t>(j)] = std::sin(kTwoPi * static_cast<double>((mode * j) % nn) / static_cast<double>(nn));
  return s;
}

// exp(-4 pi^2 nu k^2 dt) and 1 - exp(-8 pi^2 nu k^2 dt) for k = 0..n/2.
struct HeatTables {
  std::vector<double> decay;
  std::vector<double> loss;

  HeatTables(int n, double nu, double dt) {
    const int h = n / 2 + 1;
    decay.resize(static_cast<std::size_t>(h));
    loss.resize(static_cast<std::size_t>(h));
    for (int k = 0; k < h; ++k) {
      const double rate = 4.0 * kPi * kPi * nu * static_cast<double>(k) * k * dt;
      decay[static_cast<std::size_t>(k)] = std::exp(-rate);
      loss[static_cast<std::size_t>(k)] = -std::expm1(-2.0 * rate);
    }
  }

  double mult(int a, int b) const { return decay[static_cast<std::size_t>(a)] * decay[static_cast<std::size_t>(b)]; }
  // 1 - mult(a, b)^2 without cancellation.
  double removed(int a, int b) const {
    const double la = loss[static_cast<std::size_t>(a)], lb = loss[static_cast<std::size_t>(b)];
    return la + (1.0 - la) * lb;
  }
};

int abs_frequency(int k, int n) { return std::abs(signed_frequency(k, n)); }

// Multiplies a spectrum by the heat multiplier and returns the energy removed.
double heat_multiply(Spectrum& s, const HeatTables& tab) {
  const int n = s.n, h = s.half();
  std::vector<double> partial(static_cast<std::size_t>(n));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t k2) {
    const int f2 = abs_frequency(static_cast<int>(k2), n);
    double acc = 0.0;
    for (int k1 = 0; k1 < h; ++k1) {
      cplx& c = s.data[k2 * h + k1];
      acc += half_weight(k1, n) * std::norm(c) * tab.removed(k1, f2);
      c *= tab.mult(k1, f2);
    }
    partial[k2] = acc;
  });
  const double n2 = static_cast<double>(n) * n;
  return pairwise_sum(partial) / (n2 * n2);
}

double heat_step(ScalarField& theta, double nu, double dt) {
  if (nu == 0.0 || !(dt > 0.0)) return 0.0;
  Spectrum s = forward(theta);
  const double removed = heat_multiply(s, HeatTables(theta.n(), nu, dt));
  theta = inverse(s);
  return removed;
}

// Phase shifts for line-transformed data. Horizontal stages hold rows
// H[j2 * h + k1]; vertical stages hold V[k2 * n + j1]. Frequency n/2 is skipped.
// e^{-2 pi i k d} is advanced by repeated multiplication and re-anchored
// with an exact sincos every kAnchor frequencies.
constexpr int kAnchor = 32;

inline cplx unit(double ang) { return {std::cos(ang), std::sin(ang)}; }

inline void mul_into(cplx& z, const cplx& w) {
  const double a = z.real(), b = z.imag(), c = w.real(), e = w.imag();
  z = cplx(a * c - b * e, a * e + b * c);
}

void phase_horizontal(std::vector<cplx>& H, int n, const std::vector<double>& sine, double factor) {
  const int h = n / 2 + 1;
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j2) {
    const double d = factor * sine[j2];
    const cplx base = unit(-kTwoPi * d);
    cplx* row = H.data() + j2 * h;
    cplx w = base;
    for (int k = 1; k < n / 2; ++k) {
      if (k % kAnchor == 0) w = unit(-kTwoPi * k * d);
      mul_into(row[k], w);
      mul_into(w, base);
    }
  });
}

void phase_vertical(std::vector<cplx>& V, int n, const std::vector<double>& sine, double factor) {
  const std::size_t nn = static_cast<std::size_t>(n);
  const int blocks = (n / 2 + kAnchor - 1) / kAnchor;
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    const int k0 = std::max(1, static_cast<int>(b) * kAnchor);
    const int k1 = std::min(n / 2, (static_cast<int>(b) + 1) * kAnchor);
    std::vector<cplx> base(nn), w(nn);
    for (std::size_t j1 = 0; j1 < nn; ++j1) {
      const double d = factor * sine[j1];
      base[j1] = unit(-kTwoPi * d);
      w[j1] = unit(-kTwoPi * k0 * d);
    }
    for (int k = k0; k < k1; ++k) {
      cplx* row = V.data() + static_cast<std::size_t>(k) * nn;
      for (std::size_t j1 = 0; j1 < nn; ++j1) {
        mul_into(row[j1], w[j1]);
        mul_into(w[j1], base[j1]);
      }
    }
  });
}

// Line transforms along the shear axis; the other axis stays physical.
std::vector<cplx> to_lines(const ScalarField& theta, shear::Direction dir) {
  const int n = theta.n(), h = n / 2 + 1;
  const auto& p = fft::plans(n);
  std::vector<cplx> buf(static_cast<std::size_t>(n) * h);
  if (dir == shear::Direction::Horizontal) {
    parallel_for(static_cast<std::size_t>(n),
                 [&](std::size_t j2) { p.row_r2c(theta.values().data() + j2 * n, buf.data() + j2 * h); });
  } else {
    parallel_for(static_cast<std::size_t>(n),
                 [&](std::size_t j1) { p.col_r2c(theta.values().data() + j1, buf.data() + j1); });
  }
  return buf;
}

void from_lines(std::vector<cplx>& buf, ScalarField& theta, shear::Direction dir) {
  const int n = theta.n(), h = n / 2 + 1;
  const auto& p = fft::plans(n);
  const double scale = 1.0 / n;
  double* out = theta.values().data();
  if (dir == shear::Direction::Horizontal) {
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j2) {
      p.row_c2r(buf.data() + j2 * h, out + j2 * n);
      for (int j = 0; j < n; ++j) out[j2 * n + j] *= scale;
    });
  } else {
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t j1) {
      p.col_c2r(buf.data() + j1, out + j1);
      for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j) * n + j1] *= scale;
    });
  }
}

// Transform along the cross axis, apply heat (scaled by 1/n for the round trip), transform back.
double cross_heat(std::vector<cplx>& buf, int n, shear::Direction dir, const HeatTables& tab) {
  const int h = n / 2 + 1;
  const auto& p = fft::plans(n);
  const double inv_n = 1.0 / n;
  std::vector<double> partial(static_cast<std::size_t>(h));
  if (dir == shear::Direction::Horizontal) {
    parallel_for(static_cast<std::size_t>(h), [&](std::size_t k1) {
      cplx* col = buf.data() + k1;
      p.c2c_stride_half(col, fft::kForward);
      double acc = 0.0;
      for (int k2 = 0; k2 < n; ++k2) {
        cplx& c = col[static_cast<std::size_t>(k2) * h];
        const int f2 = abs_frequency(k2, n);
        acc += std::norm(c) * tab.removed(static_cast<int>(k1), f2);
        c *= tab.mult(static_cast<int>(k1), f2) * inv_n;
      }
      partial[k1] = half_weight(static_cast<int>(k1), n) * acc;
      p.c2c_stride_half(col, fft::kBackward);
    });
  } else {
    parallel_for(static_cast<std::size_t>(h), [&](std::size_t k2) {
      cplx* row = buf.data() + k2 * n;
      p.c2c_contiguous(row, fft::kForward);
      double acc = 0.0;
      for (int k1 = 0; k1 < n; ++k1) {
        const int f1 = abs_frequency(k1, n);
        acc += std::norm(row[k1]) * tab.removed(static_cast<int>(k2), f1);
        row[k1] *= tab.mult(static_cast<int>(k2), f1) * inv_n;
      }
      partial[k2] = half_weight(static_cast<int>(k2), n) * acc;
      p.c2c_contiguous(row, fft::kBackward);
    });
  }
  const double n2 = static_cast<double>(n) * n;
  return pairwise_sum(partial) / (n2 * n2);
}

void apply_phase(std::vector<cplx>& buf, int n, shear::Direction dir, const std::vector<double>& sine, double factor) {
  if (dir == shear::Direction::Horizontal)
    phase_horizontal(buf, n, sine, factor);
  else
    phase_vertical(buf, n, sine, factor);
}

void check_finite(const ScalarField& f, double t) {
  if (!f.finite()) throw InvariantError("non-finite scalar values at t = " + std::to_string(t));
}

bool is_power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

}  // namespace

ScalarField initial_datum(int n, int mode) {
  if (n < 8) throw std::invalid_argument("initial datum needs n >= 8");
  if (mode < 1) throw std::invalid_argument("datum mode must be positive");
  const std::vector<double> s = grid_sine(mode, n);
  ScalarField f(n);
  for (int j2 = 0; j2 < n; ++j2)
    for (int j1 = 0; j1 < n; ++j1) f.at(j1, j2) = s[static_cast<std::size_t>(j2)];
  return f;
}

ScalarField advect_exact(const ScalarField& f, const shear::ShearStage& stage, double t, double dt) {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  if (dt < 0.0 || t < stage.window.lo - slack || t + dt > stage.window.hi + slack)
    throw std::invalid_argument("advect_exact: [t, t + dt] leaves the stage window");
  ScalarField out = f;
  std::vector<cplx> buf = to_lines(f, stage.direction);
  apply_phase(buf, f.n(), stage.direction, grid_sine(stage.mode, f.n()), stage.displacement_factor(t, t + dt));
  from_lines(buf, out, stage.direction);
  return out;
}

ScalarField diffuse_exact(const ScalarField& f, double nu, double dt) {
  if (nu < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
  ScalarField out = f;
  heat_step(out, nu, dt);
  return out;
}

double DtPolicy::stage_dt(const shear::ShearStage& stage, double nu) const {
  double dt = stage.window.length() / steps_per_window;
  if (nu > 0.0) {
    const double m = stage.mode;
    dt = std::min(dt, diffusion_factor / (4.0 * kPi * kPi * nu * m * m));
  }
  return dt;
}

double Trajectory::energy_balance_residual() const {
  double worst = 0.0;
  for (const auto& s : stats)
    worst = std::max(worst, std::abs(s.l2 * s.l2 + s.cumulative_dissipation - initial_l2_squared) / initial_l2_squared);
  return worst;
}

ScalarStepper::ScalarStepper(const shear::TruncatedField& field, double nu, ScalarField initial, DtPolicy dt)
    : field_(field), nu_(nu), theta_(std::move(initial)), dt_(dt) {
  if (nu < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
  if (dt.steps_per_window < 1 || !(dt.diffusion_factor > 0.0)) throw std::invalid_argument("invalid dt policy");
}

void ScalarStepper::run_heat_segment(double a, double b) { dissipated_ += heat_step(theta_, nu_, b - a); }

void ScalarStepper::run_stage_segment(const shear::ShearStage& stage, double a, double b) {
  const int n = theta_.n();
  const std::vector<double> sine = grid_sine(stage.mode, n);
  std::vector<cplx> buf = to_lines(theta_, stage.direction);
  if (nu_ == 0.0) {
    apply_phase(buf, n, stage.direction, sine, stage.displacement_factor(a, b));
    ++steps_;
  } else {
    const double bound = dt_.stage_dt(stage, nu_);
    const long long m = std::max(1LL, static_cast<long long>(std::ceil((b - a) / bound - 1e-9)));
    const double dt = (b - a) / static_cast<double>(m);
    const HeatTables tab(n, nu_, dt);
    double left = a;
    for (long long i = 0; i < m; ++i) {
      const double mid = a + (static_cast<double>(i) + 0.5) * dt;
      apply_phase(buf, n, stage.direction, sine, stage.displacement_factor(left, mid));
      dissipated_ += cross_heat(buf, n, stage.direction, tab);
      left = mid;
    }
    apply_phase(buf, n, stage.direction, sine, stage.displacement_factor(left, b));
    steps_ += m;
    max_dt_ = std::max(max_dt_, dt);
  }
  from_lines(buf, theta_, stage.direction);
}

void ScalarStepper::advance_to(double t_target) {
  if (t_target < t_) throw std::invalid_argument("cannot step backwards in time");
  const auto stages = field_.stages();
  while (t_ < t_target) {
    double b = t_target;
    for (const auto* st : stages) {
      if (st->window.lo > t_ && st->window.lo < b) b = st->window.lo;
      if (st->window.hi > t_ && st->window.hi < b) b = st->window.hi;
    }
    const shear::ShearStage* st = field_.active(0.5 * (t_ + b));
    if (st != nullptr)
      run_stage_segment(*st, t_, b);
    else
      run_heat_segment(t_, b);
    check_finite(theta_, b);
    t_ = b;
  }
}

CheckpointStats snapshot_stats(double t, const ScalarField& theta, double cumulative) {
  CheckpointStats s;
  s.t = t;
  s.l2 = theta.l2();
  s.linf = theta.linf();
  s.mean = theta.mean();
  const Spectrum spec = forward(theta);
  s.grad_l2 = std::sqrt(gradient_l2_squared(spec));
  s.grad_linf = gradient_linf(spec);
  s.cumulative_dissipation = cumulative;
  return s;
}

Trajectory solve(const shear::TruncatedField& field, const SolveOptions& options) {
  const auto& cps = options.checkpoints;
  if (cps.empty()) throw std::invalid_argument("solve needs at least one checkpoint");
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (cps[i] < 0.0 || cps[i] > 2.0) throw std::invalid_argument("checkpoints must lie in [0, 2]");
    if (i > 0 && !(cps[i] > cps[i - 1])) throw std::invalid_argument("checkpoints must be strictly increasing");
  }
  if (!is_power_of_two(options.n)) throw ResolutionError("grid size must be a power of two");
  int floor = 8;
  for (const auto* st : field.stages())
    if (st->window.lo < cps.back()) floor = std::max(floor, 8 * st->mode);
  if (options.n < floor)
    throw ResolutionError("n = " + std::to_string(options.n) + " is below the resolution floor " + std::to_string(floor));

  Trajectory traj;
  traj.nu = options.nu;
  traj.n = options.n;
  traj.q_cut = field.q_cut;
  ScalarField theta_in = initial_datum(options.n, options.datum_mode);
  traj.initial_l2_squared = theta_in.l2() * theta_in.l2();
  ScalarStepper stepper(field, options.nu, std::move(theta_in), options.dt);

  double previous = 0.0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    stepper.advance_to(cps[i]);
    const double cum = stepper.cumulative_dissipation();
    traj.times.push_back(cps[i]);
    traj.diss_increments.push_back(cum - previous);
    previous = cum;
    traj.stats.push_back(snapshot_stats(cps[i], stepper.state(), cum));
    if (options.on_checkpoint) options.on_checkpoint(i, cps[i], stepper.state());
    if (options.store_fields) traj.fields.push_back(stepper.state());
  }
  traj.max_dt = stepper.max_dt();
  traj.steps = stepper.steps();
  return traj;
}

double heat_dissipation_closed_form() {
  const double p2 = kPi * kPi;
  return 2.0 * p2 * (1.0 + std::expm1(-4.0 * p2) / (2.0 * p2) - std::expm1(-8.0 * p2) / (8.0 * p2));
}

HeatCalibration heat_counterexample(double nu, double dt, int n) {
  if (!(nu > 0.0 && nu < 1.0)) throw std::invalid_argument("nu must lie in (0, 1)");
  const double k_real = 1.0 / std::sqrt(nu);
  const double k_round = std::round(k_real);
  if (std::abs(k_real - k_round) > 1e-9 * k_round) throw std::invalid_argument("nu^{-1/2} must be an integer");
  const int K = static_cast<int>(k_round);
  if (n == 0) {
    n = 8;
    while (n < 4 * K) n *= 2;
  }
  if (!is_power_of_two(n) || n <= 2 * K) throw ResolutionError("grid cannot carry the forcing mode");
  if (!(dt > 0.0 && dt <= 1.0)) throw std::invalid_argument("dt must lie in (0, 1]");
  const long long steps = std::llround(1.0 / dt);
  dt = 1.0 / static_cast<double>(steps);

  const ScalarField forcing = ScalarField::sample(
      n, [K](double x1, double) { return -4.0 * kPi * kPi * std::sin(kTwoPi * K * x1); });
  const Spectrum f = forward(forcing);
  Spectrum theta;
  theta.n = n;
  theta.data.assign(f.data.size(), cplx{});

  const int h = theta.half();
  std::vector<double> decay(theta.data.size());
  for (int k2 = 0; k2 < n; ++k2) {
    const double f2 = signed_frequency(k2, n);
    for (int k1 = 0; k1 < h; ++k1)
      decay[static_cast<std::size_t>(k2) * h + k1] = std::exp(-4.0 * kPi * kPi * nu * (k1 * static_cast<double>(k1) + f2 * f2) * dt);
  }

  // Trapezoid in time of nu ||grad theta||^2 at the step nodes.
  double acc = 0.5 * nu * gradient_l2_squared(theta);
  for (long long s = 1; s <= steps; ++s) {
    for (std::size_t i = 0; i < theta.data.size(); ++i) {
      cplx c = theta.data[i] + 0.5 * dt * f.data[i];
      c *= decay[i];
      theta.data[i] = c + 0.5 * dt * f.data[i];
    }
    const double g = nu * gradient_l2_squared(theta);
    acc += s == steps ? 0.5 * g : g;
  }

  HeatCalibration out;
  out.nu = nu;
  out.n = n;
  out.dt = dt;
  out.analytic = heat_dissipation_closed_form();
  out.numeric = acc * dt;
  out.relative_error = std::abs(out.numeric - out.analytic) / out.analytic;
  out.lower_bound_ok = out.analytic >= 0.25 && out.numeric >= 0.25;
  return out;
}

int vanishing_k(const cascade::ScaleSequences& seq, int q) {
  const double g = seq.gamma, d = seq.params.delta, ed = seq.params.epsilon * seq.params.delta;
  const double lead = (2.0 - g / (1.0 + d)) * seq.a_power(q).exponent * seq.log_a0;
  int best = 0;
  for (int k = 0; k <= q; ++k) {
    const double e_k = seq.a_power(k).exponent, e_next = seq.a_power(k + 1).exponent;
    const double growth = seq.value({1.0, e_k * (2.0 - 2.0 * g) - e_next * (2.0 + 2.0 * ed)});
    if (lead + growth <= 0.0) best = k;
  }
  return best;
}

VanishingGap vanishing_viscosity_gap(double nu, const shear::ShearSchedule& schedule, int n, DtPolicy dt) {
  const auto& seq = schedule.sequences;
  VanishingGap out;
  out.nu = nu;
  if (nu < 0.0) throw std::invalid_argument("viscosity must be nonnegative");
  if (nu == 0.0) {
    out.q = seq.depth();
    out.k = vanishing_k(seq, out.q);
    out.t_of_nu = 1.0 - seq.T_at(out.k);
    return out;
  }
  out.q = seq.truncation_level(nu);
  out.k = vanishing_k(seq, out.q);
  out.t_of_nu = 1.0 - seq.T_at(out.k);

  SolveOptions viscous;
  viscous.nu = nu;
  viscous.n = n;
  viscous.checkpoints = {out.t_of_nu};
  viscous.dt = dt;
  viscous.store_fields = true;
  SolveOptions inviscid = viscous;
  inviscid.nu = 0.0;
  const Trajectory a = solve(shear::truncate(schedule, out.q), viscous);
  const Trajectory b = solve(shear::full_field(schedule), inviscid);
  out.gap = l2_gap(a.fields.back(), b.fields.back());
  return out;
}

}  // namespace adlab::solver
