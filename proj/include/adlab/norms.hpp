#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adlab/nslift.hpp"
#include "adlab/scalar_field.hpp"

namespace adlab::norms {

enum class Kind { Linf, Calpha, L3Calpha, L1sCsigma, CalphaSpaceTime, L2gap, Dissipation };

const char* to_string(Kind k);
/// Throws std::invalid_argument for unknown tags.
Kind kind_from_string(const std::string& tag);

struct NormReport {
  Kind kind = Kind::Linf;
  double value = 0.0;
  double exponent = 0.0;  ///< alpha or sigma used
  int resolution = 0;
  std::optional<double> refinement_ratio;  ///< value at n over value at n/2, when measured
};

/// max |f(x) - f(y)| / d(x, y)^alpha over grid pairs at offsets (2^j, 0),
/// (0, 2^j), (2^j, 2^j) with torus distance d <= 1/4. alpha in (0, 1].
double holder_seminorm(const ScalarField& f, double alpha);
/// The same estimator for a periodic line of samples (a shear profile).
double holder_seminorm_1d(std::span<const double> values, double alpha);
/// Component-max convention for vector fields.
double holder_seminorm(std::span<const ScalarField* const> components, double alpha);

/// sup |f| + [f]_alpha.
double calpha_norm(const ScalarField& f, double alpha);
double calpha_norm_1d(std::span<const double> values, double alpha);

/// Every other grid point: the n/2 field used for refinement ratios.
ScalarField subsample(const ScalarField& f);
/// holder_seminorm at n divided by the value at n/2 (NaN when the coarse value is zero).
double refinement_ratio(const ScalarField& f, double alpha);

/// Trapezoid weights for possibly repeated nondecreasing nodes (a repeated
/// node encodes a jump of the integrand).
std::vector<double> trapezoid_weights(std::span<const double> times);

/// (sum_i w_i v_i^p)^{1/p} with trapezoid weights. p >= 1.
double bochner_norm(std::span<const double> times, std::span<const double> values, double p);

struct UniformityRow {
  double nu = 0.0;
  double value = 0.0;
  double running_max = 0.0;
};

struct Uniformity {
  std::vector<UniformityRow> rows;
  double max = 0.0;
  double median = 0.0;
  double ratio = 0.0;  ///< max / median (0 for an empty scan)
};

Uniformity uniformity_scan(std::span<const double> nus, std::span<const double> values);

/// Per-slice C^sigma norm of the force profile at time t (grid of n points).
double force_slice_csigma(const lift::LiftedForce& f, double t, int n, double sigma);

struct ForceNorms {
  double bochner = 0.0;    ///< L^{1+sigma}_t C^sigma_x over the supplied nodes
  double spacetime = 0.0;  ///< C^{alpha'} over (time nodes) x T^2
};

/// `times` are the quadrature / sampling nodes (nondecreasing).
ForceNorms force_norm(const lift::LiftedForce& f, std::span<const double> times, int n, double sigma,
                      double alpha_prime);

/// Space-time C^alpha of scalar slices: sup + spatial seminorm + temporal
/// quotient over dyadic checkpoint-index offsets.
double spacetime_holder(std::span<const double> times, std::span<const ScalarField> slices, double alpha);

/// max over checkpoints of |int |v|^2 + 2 nu int int |grad v|^2 - int |v_in|^2 - 2 int int F.v| / int |v_in|^2.
double energy_balance_check(const lift::LiftedSolution& v);

}  // namespace adlab::norms
