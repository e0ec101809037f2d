#include <doctest.h>

#include <cmath>
#include <random>

#include "adlab/norms.hpp"
#include "oracles.hpp"

using namespace adlab;

TEST_CASE("dyadic Hoelder seminorm equals the exhaustive pair search") {
  const ScalarField theta_in = ScalarField::sample(64, [](double, double x2) { return std::sin(2.0 * oracle::kPi * x2); });
  const double dyadic = norms::holder_seminorm(theta_in, 1.0 / 3.0);
  const double exhaustive = oracle::exhaustive_holder(theta_in, 1.0 / 3.0);
  CHECK(std::abs(dyadic - exhaustive) <= 1e-12 * exhaustive);
}

TEST_CASE("Hoelder seminorm basics") {
  const ScalarField c = ScalarField::sample(64, [](double, double) { return 3.0; });
  CHECK(norms::holder_seminorm(c, 0.5) == 0.0);

  const ScalarField s = ScalarField::sample(256, [](double x1, double) { return std::sin(2.0 * oracle::kPi * x1); });
  CHECK(norms::holder_seminorm(s, 1.0) == doctest::Approx(2.0 * oracle::kPi).epsilon(0.02));

  const ScalarField f = ScalarField::sample(64, oracle::smooth_field);
  ScalarField g = f;
  for (double& v : g.values()) v *= -2.5;
  CHECK(norms::holder_seminorm(g, 0.3) == doctest::Approx(2.5 * norms::holder_seminorm(f, 0.3)).epsilon(1e-15));
  // The dyadic estimate never exceeds the full sup.
  CHECK(norms::holder_seminorm(f, 0.3) <= oracle::exhaustive_holder(f, 0.3) * (1.0 + 1e-15));

  CHECK_THROWS(norms::holder_seminorm(f, 0.0));
  CHECK_THROWS(norms::holder_seminorm(f, 1.5));
}

TEST_CASE("refinement from a coarse grid is a sub-maximum") {
  const ScalarField f = ScalarField::sample(256, oracle::smooth_field);
  for (double a : {0.2, 0.5, 0.9}) {
    const double fine = norms::holder_seminorm(f, a), coarse = norms::holder_seminorm(norms::subsample(f), a);
    CHECK(coarse <= fine * (1.0 + 1e-3));
    CHECK(norms::refinement_ratio(f, a) == doctest::Approx(fine / coarse));
  }
}

TEST_CASE("interpolation bound between sup and Lipschitz norms") {
  // [f]_alpha <= 2^{1-alpha} ||f||_inf^{1-alpha} ||grad f||_inf^alpha on the torus.
  for (double a : {0.25, 0.5, 0.75}) {
    const ScalarField f = ScalarField::sample(128, oracle::smooth_field);
    const double lip = gradient_linf(forward(f));
    const double bound = std::pow(2.0, 1.0 - a) * std::pow(f.linf(), 1.0 - a) * std::pow(lip, a);
    CHECK(norms::holder_seminorm(f, a) <= bound * (1.0 + 1e-2));
  }
}

TEST_CASE("one-dimensional and vector variants") {
  std::vector<double> line(128);
  for (int j = 0; j < 128; ++j) line[j] = std::sin(2.0 * oracle::kPi * 3.0 * j / 128.0);
  const ScalarField plane = ScalarField::sample(128, [](double x1, double) { return std::sin(2.0 * oracle::kPi * 3.0 * x1); });
  CHECK(norms::holder_seminorm_1d(line, 0.4) <= norms::holder_seminorm(plane, 0.4) + 1e-12);
  CHECK(norms::calpha_norm_1d(line, 0.4) == doctest::Approx(1.0 + norms::holder_seminorm_1d(line, 0.4)));

  const ScalarField f = ScalarField::sample(64, oracle::smooth_field);
  ScalarField g = f;
  for (double& v : g.values()) v *= 2.0;
  const ScalarField* comps[] = {&f, &g};
  CHECK(norms::holder_seminorm(comps, 0.5) == doctest::Approx(norms::holder_seminorm(g, 0.5)));
}

TEST_CASE("Bochner norms") {
  const std::vector<double> t = {0.0, 0.25, 0.5, 1.0};
  const std::vector<double> c = {2.0, 2.0, 2.0, 2.0};
  CHECK(norms::bochner_norm(t, c, 3.0) == doctest::Approx(2.0).epsilon(1e-15));
  const std::vector<double> tp = {0.0, 0.5, 0.5, 1.0}, vp = {1.0, 1.0, 0.0, 0.0};
  CHECK(norms::bochner_norm(tp, vp, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  std::vector<double> v(t.size());
  for (double& x : v) x = u(rng);
  std::vector<double> v3 = v;
  for (double& x : v3) x *= 3.0;
  CHECK(norms::bochner_norm(t, v3, 2.0) == doctest::Approx(3.0 * norms::bochner_norm(t, v, 2.0)));
  // Unit-length interval: monotone in p.
  CHECK(norms::bochner_norm(t, v, 1.0) <= norms::bochner_norm(t, v, 2.0) + 1e-15);
  CHECK(norms::bochner_norm(t, v, 2.0) <= norms::bochner_norm(t, v, 3.0) + 1e-15);
  CHECK_THROWS(norms::bochner_norm(t, v, 0.5));
}

TEST_CASE("uniformity scan") {
  CHECK(norms::uniformity_scan({}, {}).rows.empty());
  const std::vector<double> nus = {1e-2, 1e-3, 1e-4}, vals = {1.0, 3.0, 2.0};
  const auto u = norms::uniformity_scan(nus, vals);
  CHECK(u.max == 3.0);
  CHECK(u.median == 2.0);
  CHECK(u.ratio == 1.5);
  CHECK(u.rows[2].running_max == 3.0);
}

TEST_CASE("L2 gap") {
  const ScalarField a = ScalarField::sample(32, oracle::smooth_field);
  CHECK(l2_gap(a, a) == 0.0);
  ScalarField b = a;
  for (double& v : b.values()) v = -v;
  CHECK(l2_gap(a, b) == doctest::Approx(2.0 * a.l2()).epsilon(1e-15));
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    ScalarField x(16), y(16), z(16);
    for (auto* f : {&x, &y, &z})
      for (double& v : f->values()) v = g(rng);
    CHECK(l2_gap(x, z) <= l2_gap(x, y) + l2_gap(y, z) + 1e-14);
  }
  CHECK_THROWS_AS(l2_gap(ScalarField(16), ScalarField(32)), std::invalid_argument);
}

TEST_CASE("norm kinds round-trip through their tags") {
  for (auto k : {norms::Kind::Linf, norms::Kind::Calpha, norms::Kind::L3Calpha, norms::Kind::L1sCsigma,
                 norms::Kind::CalphaSpaceTime, norms::Kind::L2gap, norms::Kind::Dissipation})
    CHECK(norms::kind_from_string(norms::to_string(k)) == k);
  CHECK_THROWS_AS(norms::kind_from_string("Besov"), std::invalid_argument);
}

TEST_CASE("space-time Hoelder of a static field is its spatial norm") {
  const ScalarField f = ScalarField::sample(32, oracle::smooth_field);
  const std::vector<ScalarField> slices = {f, f, f};
  const std::vector<double> times = {0.0, 0.5, 1.0};
  CHECK(norms::spacetime_holder(times, slices, 0.5) == doctest::Approx(norms::calpha_norm(f, 0.5)));
}
