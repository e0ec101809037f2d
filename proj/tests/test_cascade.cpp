#include <doctest.h>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "adlab/cascade.hpp"

using namespace adlab::cascade;

namespace {

using big = boost::multiprecision::cpp_dec_float_50;

big gamma_oracle(const big& beta, const big& eps, const big& delta) {
  return 3 * beta * (1 + 3 * eps * (1 + delta)) * (1 + delta) / (1 - delta) + delta / 8;
}

CascadeParams desk() {
  CascadeParams p;
  p.alpha = 0.3;
  p.delta = 0.25;
  p.truncated_regime = true;
  return p;
}

}  // namespace

TEST_CASE("gamma with beta = 0 is delta / 8") {
  CHECK(compute_gamma(0.0, 1e-4, 0.1) == doctest::Approx(0.0125).epsilon(1e-15));
  CHECK(compute_gamma(0.0, 0.2, 1e-9) < 1e-9);
}

TEST_CASE("gamma agrees with a 50-digit evaluation") {
  const big oracle = gamma_oracle(big("0.3"), big("2e-5"), big("0.01"));
  const double g = compute_gamma(0.3, 2e-5, 0.01);
  CHECK(std::abs(g - oracle.convert_to<double>()) <= 2e-16 * g);
  for (double beta : {0.0, 0.05, 0.2, 0.33}) {
    for (double delta : {0.001, 0.1, 0.24}) {
      const big o = gamma_oracle(big(beta), big(1e-4), big(delta));
      const double v = compute_gamma(beta, 1e-4, delta);
      CHECK(std::abs(v - o.convert_to<double>()) <= 4e-16 * std::max(v, 1e-300));
    }
  }
}

TEST_CASE("gamma rejects out-of-range parameters") {
  CHECK_THROWS_AS(compute_gamma(-0.1, 1e-4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(compute_gamma(1.0 / 3.0, 1e-4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(compute_gamma(0.1, 0.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(compute_gamma(0.1, 1e-4, 0.25), std::invalid_argument);
}

TEST_CASE("admissibility conditions") {
  CascadeParams p;
  p.alpha = 1.0 / 3.0;
  p.beta = 1.0 / 3.0;
  p.delta = 0.1;
  CHECK_FALSE(check_conditions(p).at("alpha_plus_2beta").pass);
  CHECK(std::abs(check_conditions(p).at("alpha_plus_2beta").slack) < 1e-15);

  CascadeParams q;
  q.alpha = 0.1;
  q.delta = 0.2;
  q.epsilon = 0.2 * 0.2 * 0.2 / 50.0;
  const auto c = check_conditions(q).at("eps_delta");
  CHECK(c.pass);
  CHECK(std::abs(c.slack) < 1e-18);

  // Every inequality evaluated directly.
  CascadeParams r;
  r.alpha = 0.3;
  r.beta = 0.3;
  r.delta = 0.01;
  r.epsilon = 2e-8;
  r.a0 = 1e-6;
  const auto rep = check_conditions(r);
  CHECK(rep.items.size() == 5);
  CHECK(rep.at("alpha_plus_2beta").pass == (0.3 + 0.6 < 1.0));
  CHECK(rep.at("eps_delta").pass == (2e-8 <= 0.01 * 0.01 * 0.01 / 50.0));
  CHECK_THROWS(rep.at("no_such_condition"));
}

TEST_CASE("eps_delta slack is monotone in epsilon") {
  CascadeParams p;
  p.alpha = 0.1;
  p.delta = 0.2;
  for (double e : {1e-4, 1e-5, 1e-6, 1e-8}) {
    p.epsilon = e;
    CHECK(check_conditions(p).at("eps_delta").pass);
  }
  // Shrinking delta tightens eps <= delta^3 / 50, so it can break the condition.
  p.epsilon = 1e-4;
  p.delta = 0.05;
  CHECK_FALSE(check_conditions(p).at("eps_delta").pass);
}

TEST_CASE("exact powers of two") {
  CascadeParams p;
  p.alpha = 0.1;
  p.a0 = 0.25;
  p.delta = 1.0;
  p.depth = 2;
  p.truncated_regime = true;
  const auto s = build_sequences(p);
  REQUIRE(s.a.size() == 3);
  CHECK(s.value(s.a[0]) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s.value(s.a[1]) == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(s.value(s.a[2]) == doctest::Approx(0.00390625).epsilon(1e-15));
  CHECK(s.value(s.lambda[0]) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.value(s.lambda[1]) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(s.value(s.lambda[2]) == doctest::Approx(128.0).epsilon(1e-15));
}

TEST_CASE("time increments respect the 4 a_q^{gamma - gamma delta} bound") {
  for (double delta : {0.1, 0.25, 0.5}) {
    CascadeParams p = desk();
    p.delta = delta;
    p.depth = 4;
    const auto s = build_sequences(p);
    for (int q = 0; q < p.depth; ++q) {
      const double bound = 4.0 * std::pow(s.a_at(q), s.gamma - s.gamma * delta);
      CHECK(s.T_at(q) - s.T_at(q + 1) > 0.0);
      CHECK(s.T_at(q) - s.T_at(q + 1) <= bound * (1.0 + 1e-14));
    }
    CHECK(s.T_at(0) < 1.0);
    CHECK(s.T_at(-1) == 1.0);
    CHECK(s.T_at(p.depth + 1) == 0.0);
  }
}

TEST_CASE("viscosity sequences interleave and the exponent sign is reported") {
  CascadeParams p = desk();
  p.delta = 0.1;
  const auto s = build_sequences(p);
  CHECK(s.gamma == doctest::Approx(0.0125));
  // nu_tilde_q / a_q^2 = a_q^{-gamma/(1+delta) + 4 eps}; the exponent is negative here.
  CHECK(-s.gamma / 1.1 + 4e-4 < 0.0);
  for (int q = 0; q <= p.depth; ++q) {
    const auto i = static_cast<std::size_t>(q);
    const double ratio = s.value(s.nu_tilde[i]) / (s.a_at(q) * s.a_at(q));
    if (q > 0) CHECK(ratio > s.value(s.nu_tilde[i - 1]) / (s.a_at(q - 1) * s.a_at(q - 1)));
    CHECK(s.value(s.nu_cons_A[i]) < s.value(s.nu_tilde[i]));
    if (q + 1 <= p.depth) CHECK(s.value(s.nu_tilde[i + 1]) < s.value(s.nu_tilde[i]));
  }
}

TEST_CASE("truncation level brackets nu") {
  const auto s = build_sequences(desk());
  for (int q = 0; q <= 3; ++q) {
    const double nu = s.nu_tilde_at(q);
    CHECK(s.truncation_level(nu) == q);
    CHECK(s.truncation_level(nu * 0.999) >= q);
  }
  CHECK(s.truncation_level(1.0) == 0);
  CHECK(s.truncation_level(1e-30) == 3);
}

TEST_CASE("log-space values survive where doubles underflow") {
  CascadeParams p = desk();
  p.a0 = 1e-10;
  p.delta = 1.0;
  p.depth = 3;
  // a_3 = 1e-80 and nu_tilde_3 ~ 1e-160 are representable; a_4^2 is not.
  const auto s = build_sequences(p);
  CHECK(s.log10_value(s.a[3]) == doctest::Approx(-80.0));
  p.depth = 4;
  CHECK_THROWS_AS(build_sequences(p), std::underflow_error);
}

TEST_CASE("strict regime rejects desk parameters") {
  CascadeParams p = desk();
  p.truncated_regime = false;
  CHECK_THROWS_AS(build_sequences(p), std::invalid_argument);
}

TEST_CASE("sequence CSV has one row per level") {
  const auto s = build_sequences(desk());
  std::istringstream in(sequences_csv(s));
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("q,a_q,log10_a_q,lambda_q", 0) == 0);
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("sigma is the midpoint of its window") {
  const auto w = select_sigma(0.03125, 1e-4, 0.25);
  CHECK(w.upper > 0.0);
  CHECK(w.chosen == doctest::Approx(0.5 * w.upper));
}
