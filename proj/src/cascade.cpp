#include "adlab/cascade.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "adlab/errors.hpp"

namespace adlab::cascade {

namespace {

double gamma_expression(double beta, double epsilon, double delta) {
  double first = 0.0;
  if (beta != 0.0) {
    first = 3.0 * beta * (1.0 + 3.0 * epsilon * (1.0 + delta)) * (1.0 + delta) / (1.0 - delta);
  }
  return first + delta / 8.0;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// First positive root of a function that is positive at 0 and negative at hi.
template <class F>
double bisect_root(F&& f, double hi) {
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double compute_gamma(double beta, double epsilon, double delta) {
  require(beta >= 0.0 && beta < 1.0 / 3.0, "beta must lie in [0, 1/3)");
  require(epsilon > 0.0 && epsilon < 0.25, "epsilon must lie in (0, 1/4)");
  require(delta > 0.0 && delta < 0.25, "delta must lie in (0, 1/4)");
  return gamma_expression(beta, epsilon, delta);
}

void validate(const CascadeParams& p) {
  require(p.alpha >= 0.0 && p.alpha < 1.0, "alpha must lie in [0, 1)");
  require(p.beta >= 0.0 && p.beta < 1.0 / 3.0, "beta must lie in [0, 1/3)");
  require(p.a0 > 0.0 && p.a0 < 1.0, "a0 must lie in (0, 1)");
  require(p.depth >= 1, "cascade depth Q must be >= 1");
  require(p.t0_target > 0.0 && p.t0_target < 1.0, "t0_target must lie in (0, 1)");
  require(p.sigma >= 0.0 && p.sigma < 1.0, "sigma must lie in [0, 1)");
  if (p.truncated_regime) {
    require(p.epsilon > 0.0 && p.epsilon < 1.0, "epsilon must lie in (0, 1)");
    require(p.delta > 0.0 && p.delta <= 1.0, "delta must lie in (0, 1]");
    require(p.beta == 0.0 || p.delta < 1.0, "delta = 1 needs beta = 0");
  } else {
    require(p.epsilon > 0.0 && p.epsilon < 0.25, "epsilon must lie in (0, 1/4)");
    require(p.delta > 0.0 && p.delta < 0.25, "delta must lie in (0, 1/4)");
  }
  const double g = gamma_expression(p.beta, p.epsilon, p.delta);
  require(std::isfinite(g) && g > 0.0 && g < 1.0, "gamma must lie in (0, 1)");
}

double gamma_of(const CascadeParams& p) {
  validate(p);
  return gamma_expression(p.beta, p.epsilon, p.delta);
}

bool ConditionReport::all_pass() const {
  for (const auto& c : items)
    if (!c.pass) return false;
  return true;
}

const Condition& ConditionReport::at(const std::string& name) const {
  for (const auto& c : items)
    if (c.name == name) return c;
  throw std::out_of_range("unknown condition: " + name);
}

ConditionReport check_conditions(const CascadeParams& p) {
  const double a = p.alpha, b = p.beta, e = p.epsilon, d = p.delta;
  const double beta_term = 3.0 * e * (1.0 + d);
  ConditionReport r;

  const double s_ab = 1.0 - (a + 2.0 * b);
  r.items.push_back({"alpha_plus_2beta", s_ab, s_ab > 0.0});

  const double s_kappa = 1.0 - 2.0 * b * (1.0 + beta_term) * (1.0 + d) / (1.0 - d) -
                         a * (1.0 + e * d) * (1.0 + d) - d / 8.0;
  r.items.push_back({"alpha_beta_eps_kappa", s_kappa, s_kappa > 0.0});

  const double s_gamma = 1.0 - (3.0 * b * (1.0 + beta_term) * (1.0 + d) / (1.0 - d) + d / 8.0);
  r.items.push_back({"gamma_eps", s_gamma, s_gamma > 0.0});

  const double s_ed = d * d * d / 50.0 - e;
  r.items.push_back({"eps_delta", s_ed, s_ed >= 0.0});

  const double s_d0 = 1.0 / 20.0 - (std::pow(p.a0, e * d * d) + std::pow(p.a0, e * d / 8.0));
  r.items.push_back({"d0", s_d0, s_d0 >= 0.0});
  return r;
}

SigmaWindow select_sigma(double gamma, double epsilon, double delta) {
  const double c = (1.0 + delta) * (1.0 + epsilon * delta);
  auto force_exponent = [&](double s) { return gamma + (1.0 + s) * (1.0 - 2.0 * gamma - s * c); };
  auto laplacian_exponent = [&](double s) {
    return 2.0 + 2.0 * delta - (1.0 + s) * (1.0 + 2.0 * delta + gamma + s * c);
  };
  if (!(force_exponent(0.0) > 0.0) || !(laplacian_exponent(0.0) > 0.0))
    throw std::invalid_argument("no admissible sigma: gamma must be below 1");
  const double upper = std::min(bisect_root(force_exponent, 1.0), bisect_root(laplacian_exponent, 1.0));
  return {upper, 0.5 * upper};
}

double ScaleSequences::value(const ScaledPower& v) const {
  return v.mantissa * std::exp(v.exponent * log_a0);
}

double ScaleSequences::log10_value(const ScaledPower& v) const {
  return std::log10(v.mantissa) + v.exponent * log_a0 / std::log(10.0);
}

ScaledPower ScaleSequences::a_power(int q) const {
  if (q < 0) throw std::out_of_range("a_q needs q >= 0");
  if (q < static_cast<int>(a.size())) return a[static_cast<std::size_t>(q)];
  ScaledPower v = a.back();
  for (int j = static_cast<int>(a.size()) - 1; j < q; ++j) v.exponent *= 1.0 + params.delta;
  return v;
}

double ScaleSequences::lambda_at(int q) const {
  const ScaledPower aq = a_power(q);
  return value({0.5 / aq.mantissa, -aq.exponent});
}

double ScaleSequences::nu_tilde_at(int q) const {
  const ScaledPower aq = a_power(q);
  const double d = params.delta;
  return value({1.0, aq.exponent * (2.0 - gamma / (1.0 + d) + 4.0 * params.epsilon)});
}

double ScaleSequences::T_at(int q) const {
  if (q < 0) return 1.0;
  if (q > depth()) return 0.0;
  return T[static_cast<std::size_t>(q)];
}

int ScaleSequences::truncation_level(double nu) const {
  int q = 0;
  for (int j = 0; j <= depth(); ++j)
    if (nu <= value(nu_tilde[static_cast<std::size_t>(j)])) q = j;
  return q;
}

ScaleSequences build_sequences(const CascadeParams& p) {
  validate(p);
  const ConditionReport report = check_conditions(p);
  if (!p.truncated_regime && !report.all_pass()) {
    std::string failed;
    for (const auto& c : report.items)
      if (!c.pass) failed += " " + c.name;
    throw std::invalid_argument("admissibility conditions fail:" + failed +
                                " (set truncated_regime for desk-scale parameters)");
  }

  ScaleSequences s;
  s.params = p;
  s.gamma = gamma_expression(p.beta, p.epsilon, p.delta);
  s.log_a0 = std::log(p.a0);
  const SigmaWindow window = select_sigma(s.gamma, p.epsilon, p.delta);
  s.sigma = p.sigma > 0.0 ? p.sigma : window.chosen;

  const double d = p.delta, e = p.epsilon, g = s.gamma;
  const double nu_tilde_exp = 2.0 - g / (1.0 + d) + 4.0 * e;
  const double nu_a_exp = 2.0 - g + d + 8.0 * e;
  const double nu_c_exp = 2.0 + 3.0 * e;

  double exponent = 1.0;
  for (int q = 0; q <= p.depth; ++q) {
    s.a.push_back({1.0, exponent});
    s.lambda.push_back({0.5, -exponent});
    s.nu_tilde.push_back({1.0, exponent * nu_tilde_exp});
    s.nu_cons_A.push_back({1.0, exponent * nu_a_exp});
    s.nu_cons_C.push_back({1.0, exponent * nu_c_exp});
    exponent *= 1.0 + d;
  }

  auto check_normal = [&](const std::vector<ScaledPower>& seq, const char* name) {
    for (std::size_t q = 0; q < seq.size(); ++q) {
      const double v = s.value(seq[q]);
      if (!std::isfinite(v) || v < DBL_MIN)
        throw std::underflow_error(std::string(name) + " underflows at q = " + std::to_string(q) +
                                   "; reduce Q or raise a0");
    }
  };
  check_normal(s.a, "a_q");
  check_normal(s.lambda, "lambda_q");
  check_normal(s.nu_tilde, "nu_tilde_q");
  check_normal(s.nu_cons_A, "nu_cons_A_q");
  check_normal(s.nu_cons_C, "nu_cons_C_q");

  // Saturated increments 4 a_q^(gamma - gamma delta), summed from the top.
  std::vector<double> increments;
  for (int q = 0; q <= p.depth; ++q) {
    const double inc = 4.0 * s.value({1.0, s.a[static_cast<std::size_t>(q)].exponent * (g - g * d)});
    if (!(inc > 0.0)) throw std::underflow_error("time increment underflows at q = " + std::to_string(q));
    increments.push_back(inc);
  }
  std::vector<double> suffix(increments.size() + 1, 0.0);
  for (int q = p.depth; q >= 0; --q)
    suffix[static_cast<std::size_t>(q)] = suffix[static_cast<std::size_t>(q) + 1] + increments[static_cast<std::size_t>(q)];
  s.time_scale = std::min(1.0, p.t0_target / suffix[0]);
  for (int q = 0; q <= p.depth; ++q) s.T.push_back(s.time_scale * suffix[static_cast<std::size_t>(q)]);
  for (int q = 0; q <= p.depth; ++q) {
    if (!(s.T_at(q) > s.T_at(q + 1)))
      throw std::underflow_error("T_q is not strictly decreasing at q = " + std::to_string(q));
  }

  // nu_tilde_{q+1} < nu_cons_A[q] <= nu_tilde_q, compared on exponents (base a0 < 1).
  for (int q = 0; q <= p.depth; ++q) {
    const double e_q = s.a[static_cast<std::size_t>(q)].exponent;
    const double e_next = e_q * (1.0 + d);
    const double tilde_q = e_q * nu_tilde_exp;
    const double tilde_next = e_next * nu_tilde_exp;
    const double cons = s.nu_cons_A[static_cast<std::size_t>(q)].exponent;
    if (!(tilde_next > cons && cons >= tilde_q))
      throw InvariantError("viscosity interleaving fails at q = " + std::to_string(q));
  }
  return s;
}

std::string sequences_csv(const ScaleSequences& s) {
  std::ostringstream out;
  out << "q,a_q,log10_a_q,lambda_q,log10_lambda_q,T_q,log10_T_q,nu_tilde_q,log10_nu_tilde_q,"
         "nu_cons_A_q,log10_nu_cons_A_q,nu_cons_C_q,log10_nu_cons_C_q\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out << buf;
  };
  for (int q = 0; q <= s.depth(); ++q) {
    const auto i = static_cast<std::size_t>(q);
    out << q;
    for (const auto* seq : {&s.a, &s.lambda}) {
      put(s.value((*seq)[i]));
      put(s.log10_value((*seq)[i]));
    }
    put(s.T[i]);
    put(std::log10(s.T[i]));
    for (const auto* seq : {&s.nu_tilde, &s.nu_cons_A, &s.nu_cons_C}) {
      put(s.value((*seq)[i]));
      put(s.log10_value((*seq)[i]));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace adlab::cascade
