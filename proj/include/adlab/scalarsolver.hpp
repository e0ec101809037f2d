#pragma once

#include <functional>
#include <vector>

#include "adlab/scalar_field.hpp"
#include "adlab/shearflow.hpp"

namespace adlab::solver {

/// sin(2 pi mode x2): smooth, mean zero, sup norm one.
ScalarField initial_datum(int n, int mode = 1);

/// Transport by `stage` over [t, t + dt]. Each row (horizontal shear) or
/// column (vertical shear) is translated by its displacement through a
/// Fourier phase shift; the Nyquist coefficient is left in place so the map
/// stays orthogonal. Throws std::invalid_argument if [t, t + dt] leaves the
/// stage window.
ScalarField advect_exact(const ScalarField& f, const shear::ShearStage& stage, double t, double dt);

/// Heat flow by the multiplier exp(-4 pi^2 nu |k|^2 dt).
ScalarField diffuse_exact(const ScalarField& f, double nu, double dt);

struct DtPolicy {
  int steps_per_window = 64;      ///< dt <= window / steps_per_window
  double diffusion_factor = 0.1;  ///< dt <= diffusion_factor / (4 pi^2 nu mode^2)

  /// Step bound inside a stage (infinite when nu = 0).
  double stage_dt(const shear::ShearStage& stage, double nu) const;
};

struct CheckpointStats {
  double t = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double mean = 0.0;
  double grad_l2 = 0.0;
  double grad_linf = 0.0;
  double cumulative_dissipation = 0.0;  ///< 2 nu int_0^t ||grad theta||^2
};

/// Checkpoint data of a solve. Dissipation increments are the exact energy
/// removed by the heat sub-steps, i.e. 2 nu int ||grad theta||^2 over each
/// interval (t_{i-1}, t_i] with t_{-1} = 0.
struct Trajectory {
  double nu = 0.0;
  int n = 0;
  int q_cut = 0;
  double initial_l2_squared = 0.0;
  std::vector<double> times;
  std::vector<ScalarField> fields;  ///< empty unless requested
  std::vector<double> diss_increments;
  std::vector<CheckpointStats> stats;
  double max_dt = 0.0;  ///< largest split step used inside a stage
  long long steps = 0;

  double cumulative(std::size_t i) const { return stats[i].cumulative_dissipation; }
  /// max over checkpoints of |theta^2 + cumulative - theta_in^2| / theta_in^2 (L2 squared).
  double energy_balance_residual() const;
};

using CheckpointCallback = std::function<void(std::size_t index, double t, const ScalarField& theta)>;

struct SolveOptions {
  double nu = 0.0;
  int n = 0;
  std::vector<double> checkpoints;  ///< strictly increasing, inside [0, 2]
  DtPolicy dt;
  bool store_fields = false;
  int datum_mode = 1;
  CheckpointCallback on_checkpoint;
};

/// Time stepper for the advection-diffusion equation driven by a truncated
/// shear field. Between stage boundaries it performs Strang steps
/// advect(dt/2) diffuse(dt) advect(dt/2); the half-step phase shifts of
/// consecutive steps are merged, so each step costs two line-transform passes.
/// With nu = 0 every segment is a single exact transport.
class ScalarStepper {
 public:
  ScalarStepper(const shear::TruncatedField& field, double nu, ScalarField initial, DtPolicy dt = {});

  double time() const { return t_; }
  const ScalarField& state() const { return theta_; }
  double cumulative_dissipation() const { return dissipated_; }
  double max_dt() const { return max_dt_; }
  long long steps() const { return steps_; }

  /// Advances to `t_target` (>= time()).
  void advance_to(double t_target);

 private:
  void run_stage_segment(const shear::ShearStage& stage, double a, double b);
  void run_heat_segment(double a, double b);

  shear::TruncatedField field_;
  double nu_;
  ScalarField theta_;
  DtPolicy dt_;
  double t_ = 0.0;
  double dissipated_ = 0.0;
  double max_dt_ = 0.0;
  long long steps_ = 0;
};

/// Solves from theta_in at t = 0 through every checkpoint.
/// Throws ResolutionError when n is below the resolution floor of the stages
/// met before the last checkpoint, InvariantError on non-finite values.
Trajectory solve(const shear::TruncatedField& field, const SolveOptions& options);

/// Statistics of one snapshot.
CheckpointStats snapshot_stats(double t, const ScalarField& theta, double cumulative);

struct HeatCalibration {
  double nu = 0.0;
  int n = 0;
  double dt = 0.0;
  double analytic = 0.0;  ///< nu int_0^1 int |grad theta|^2 in closed form
  double numeric = 0.0;
  double relative_error = 0.0;
  bool lower_bound_ok = false;  ///< both values >= 1/4
};

/// 2 pi^2 [1 - (1 - e^{-4 pi^2}) / (2 pi^2) + (1 - e^{-8 pi^2}) / (8 pi^2)].
double heat_dissipation_closed_form();

/// Forced heat equation d_t theta - nu Lap theta = -4 pi^2 sin(2 pi K x1), K = nu^{-1/2},
/// from theta = 0 on [0, 1]. n = 0 picks 4K rounded up to a power of two.
/// Throws std::invalid_argument unless nu in (0, 1) and K is an integer.
HeatCalibration heat_counterexample(double nu, double dt = 1e-5, int n = 0);

struct VanishingGap {
  double nu = 0.0;
  int q = 0;  ///< truncation level with nu in (nu_tilde_{q+1}, nu_tilde_q]
  int k = 0;
  double t_of_nu = 0.0;  ///< 1 - T_k
  double gap = 0.0;      ///< ||theta_nu(t) - theta_0(t)||_{L2}
};

/// Largest k <= q with a_q^{2 - gamma/(1+delta)} exp(a_k^{2-2gamma} a_{k+1}^{-2-2 eps delta}) <= 1, else 0.
int vanishing_k(const cascade::ScaleSequences& seq, int q);

/// nu = 0 returns a zero gap at t = 1 - T_Q.
VanishingGap vanishing_viscosity_gap(double nu, const shear::ShearSchedule& schedule, int n, DtPolicy dt = {});

}  // namespace adlab::solver
