#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "adlab/scalarsolver.hpp"
#include "adlab/shearflow.hpp"

namespace adlab::lift {

/// v = (u_q, theta), p = 0. The third dimension is symbolic: every field is
/// independent of x3, so only the 2D data is stored.
struct LiftedSolution {
  shear::TruncatedField u;
  const solver::Trajectory* theta = nullptr;
  double nu = 0.0;
  int q_of_nu = 0;          ///< level with nu in (nu_tilde_{q+1}, nu_tilde_q]
  bool level_matches = false;  ///< q_cut agrees with q_of_nu (nu = 0 pairs with the full field)
};

/// Throws std::invalid_argument if the trajectory was not produced with
/// this truncation and viscosity.
LiftedSolution lift(const shear::TruncatedField& u, const solver::Trajectory& theta, double nu);

/// F = (d_t u_q - nu Lap u_q, 0), evaluated from the closed-form profile.
struct LiftedForce {
  shear::TruncatedField u;
  double nu = 0.0;

  /// Scalar c(t) with F(t, x) = c(t) sin(2 pi mode y) along the active shear direction.
  double coefficient(double t) const;
  std::array<double, 3> at(double t, double x1, double x2) const;
  /// Force profile on n points (same layout as shear::sample_velocity).
  shear::ProfileSample sample(double t, int n) const;
};

LiftedForce force(const shear::TruncatedField& u, double nu);

/// u_q(t, x) as a 3-vector.
std::array<double, 3> velocity_at(const shear::TruncatedField& u, double t, double x1, double x2);

struct ResidualReport {
  std::array<double, 3> component_residuals{};
  double t = 0.0;
  double h = 0.0;  ///< checkpoint spacing used for d_t theta
  double dt = 0.0;
  int n = 0;
  double nu = 0.0;
  int samples = 0;
};

/// Max residual of d_t v + v.grad v + grad p - nu Lap v - F at random grid
/// points. Components 1-2 use analytic derivatives. Component 3 needs three
/// stored checkpoints t - h, t, t + h (index `center` is t) and uses a
/// centered time difference with spectral space derivatives.
ResidualReport ns_residual(const LiftedSolution& v, const LiftedForce& f, std::size_t center, int samples,
                           std::uint64_t seed = 7);

/// Probe time and step for residual checks: a point on the rising ramp of the
/// finest stage of u_q inside I, and the split step used there.
struct Probe {
  double t = 0.0;
  double h = 0.0;
};
Probe residual_probe(const shear::TruncatedField& u, double nu, const solver::DtPolicy& dt);

/// Solves with stored checkpoints {t - h, t, t + h} around the probe and returns the residual.
ResidualReport residual_run(const shear::TruncatedField& u, double nu, int n, const solver::DtPolicy& dt, int samples,
                            std::uint64_t seed = 7);

struct Dissipation3D {
  double total = 0.0;       ///< nu int_0^t int |grad v|^2
  double theta_part = 0.0;  ///< nu int_0^t int |grad theta|^2
  double u_part = 0.0;
};

/// Dissipation up to checkpoint `index` of the trajectory.
Dissipation3D dissipation_3d(const LiftedSolution& v, std::size_t index);
/// nu int_0^t int |grad u_q|^2 in closed form.
double u_dissipation(const shear::TruncatedField& u, double nu, double t);

struct EnergyCheck {
  double t = 0.0;
  double lhs = 0.0;  ///< int |v(t)|^2
  double rhs = 0.0;  ///< int |v_in|^2 + 2 int_0^t int F.v
  bool ok = false;
};

/// Energy inequality of admissible solutions at every checkpoint (relative tolerance `tol`).
std::vector<EnergyCheck> energy_inequality(const LiftedSolution& v, double tol = 1e-6);

/// sup over checkpoints of max(sup |u_q|, sup |theta|).
double sup_norm(const LiftedSolution& v);

/// Evolves the 3D system directly: the first two components follow the
/// prescribed shear, the third is stepped as a passive scalar. Exists to
/// certify that the third component never feeds back.
class LiftedStepper {
 public:
  LiftedStepper(const shear::TruncatedField& u, double nu, int n, solver::DtPolicy dt = {}, int datum_mode = 1);

  void advance_to(double t) { third_.advance_to(t); }
  double time() const { return third_.time(); }
  const ScalarField& third() const { return third_.state(); }
  shear::ProfileSample horizontal_part(int n) const { return shear::sample_velocity(u_, third_.time(), n); }

 private:
  shear::TruncatedField u_;
  solver::ScalarStepper third_;
};

}  // namespace adlab::lift
