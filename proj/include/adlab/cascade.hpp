#pragma once

#include <string>
#include <vector>

namespace adlab::cascade {

/// Parameter hierarchy of the alternating-shear cascade.
///
/// In the strict regime every exponent lives in the open ranges required by
/// the construction and all five admissibility inequalities must hold. Desk
/// runs set `truncated_regime`: the a0 condition is allowed to fail (it
/// needs astronomically small a0) and epsilon, delta may leave (0, 1/4).
struct CascadeParams {
  double alpha = 0.0;
  double beta = 0.0;
  double epsilon = 1e-4;
  double delta = 0.1;
  double sigma = 0.0;  ///< 0 selects the midpoint of the admissible window
  double a0 = 0.1;
  int depth = 3;  ///< Q: sequences are built for q = 0..Q
  bool truncated_regime = false;
  double t0_target = 0.95;  ///< cap on T_0 used to normalize the time schedule
};

/// 3 beta (1 + 3 eps (1 + delta)) (1 + delta) / (1 - delta) + delta / 8.
/// Throws std::invalid_argument unless beta in [0, 1/3) and eps, delta in (0, 1/4).
double compute_gamma(double beta, double epsilon, double delta);

/// Gamma under the domain rules of `p`'s regime. beta = 0 drops the first
/// term exactly (so delta = 1 is admissible there).
double gamma_of(const CascadeParams& p);

/// Throws std::invalid_argument if `p` is outside the domain of its regime.
void validate(const CascadeParams& p);

struct Condition {
  std::string name;
  double slack = 0.0;  ///< positive (or zero for non-strict ones) when it holds
  bool pass = false;
};

struct ConditionReport {
  std::vector<Condition> items;

  bool all_pass() const;
  const Condition& at(const std::string& name) const;
};

/// Evaluates alpha + 2 beta < 1, the alpha/beta/eps/kappa inequality, the
/// gamma/eps inequality, eps <= delta^3 / 50 and the a0 condition. Never throws.
ConditionReport check_conditions(const CascadeParams& p);

struct SigmaWindow {
  double upper = 0.0;   ///< admissible sigma lie in (0, upper)
  double chosen = 0.0;  ///< midpoint
};

/// Window of sigma > 0 for which both force-regularity exponents stay positive.
SigmaWindow select_sigma(double gamma, double epsilon, double delta);

/// mantissa * a0^exponent. Exponent arithmetic is exact where the sequences
/// need it; conversion to double only happens at solver boundaries.
struct ScaledPower {
  double mantissa = 1.0;
  double exponent = 0.0;
};

class ScaleSequences {
 public:
  CascadeParams params;
  double gamma = 0.0;
  double sigma = 0.0;
  double log_a0 = 0.0;
  double time_scale = 1.0;  ///< factor applied to the saturated increments

  std::vector<ScaledPower> a;          ///< a_q
  std::vector<ScaledPower> lambda;     ///< 1 / (2 a_q)
  std::vector<ScaledPower> nu_tilde;   ///< a_q^(2 - gamma/(1+delta) + 4 eps)
  std::vector<ScaledPower> nu_cons_A;  ///< a_q^(2 - gamma + delta + 8 eps)
  std::vector<ScaledPower> nu_cons_C;  ///< a_q^(2 + 3 eps)
  std::vector<double> T;               ///< T_q, q = 0..Q

  int depth() const { return params.depth; }

  double value(const ScaledPower& v) const;
  double log10_value(const ScaledPower& v) const;

  /// a_q for any q >= 0 (beyond Q it is extrapolated with the same recursion).
  ScaledPower a_power(int q) const;
  double a_at(int q) const { return value(a_power(q)); }
  double lambda_at(int q) const;
  double nu_tilde_at(int q) const;

  /// T_q with T_{-1} = 1 and T_{Q+1} = 0.
  double T_at(int q) const;

  /// Largest q in [0, Q] with nu <= nu_tilde_q; 0 when nu > nu_tilde_0.
  int truncation_level(double nu) const;
};

/// Builds a_q, lambda_q, T_q and the three viscosity sequences.
///
/// T_q = s * sum_{j=q..Q} 4 a_j^(gamma - gamma delta) with s = min(1, t0_target / raw T_0):
/// increments saturate the allowed bound whenever that keeps T_0 below one.
/// Throws std::invalid_argument on failed preconditions and
/// std::underflow_error when a value leaves the normal double range.
ScaleSequences build_sequences(const CascadeParams& p);

/// CSV table: q and every sequence in float and log10 form.
std::string sequences_csv(const ScaleSequences& s);

}  // namespace adlab::cascade
