#include <doctest.h>

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "adlab/experiments.hpp"
#include "adlab/parallel.hpp"
#include "oracles.hpp"

using namespace adlab;
using namespace adlab::experiments;

namespace {

const char* kSmall = R"(
[experiment]
tag = theoremA
q_min = 0
q_max = 1
t_end = 0.6
checkpoints_per_window = 4
force_nodes_per_window = 16

[cascade]
alpha = 0.3
delta = 0.25
truncated_regime = true
)";

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(kSmall);
  CHECK(c.tag == Tag::TheoremA);
  CHECK(c.q_max == 1);
  CHECK(c.t_end == 0.6);
  CHECK(c.cascade.truncated_regime);
  CHECK(c.cascade.epsilon == 1e-4);
  CHECK(c.thresholds.energy_tol == 1e-6);

  const auto v = parse_config("[experiment]\ntag = vanishing\nnu_list = 1e-2, 3e-3 ,1e-4\n");
  CHECK(v.nu_list == std::vector<double>{1e-2, 3e-3, 1e-4});

  CHECK_THROWS_AS(parse_config("[experiment]\ntag = theoremZ\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[experiment]\nq_mx = 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[weird]\nx = 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[experiment]\nq_max = three\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config("[experiment]\nt_end = 3\n"), std::invalid_argument);
  for (Tag t : {Tag::TheoremA, Tag::DichotomyB, Tag::DichotomyC, Tag::Vanishing, Tag::HeatCalibration})
    CHECK(tag_from_string(to_string(t)) == t);
}

TEST_CASE("stage-aligned checkpoints") {
  const auto c = parse_config(kSmall);
  const auto s = shear::build_schedule(cascade::build_sequences(c.cascade));
  const auto times = stage_aligned_times(s, 1.0, 4);
  CHECK(times.front() == 0.0);
  CHECK(times.back() == 1.0);
  for (std::size_t i = 1; i < times.size(); ++i) CHECK(times[i] > times[i - 1]);
  for (const auto& st : s.stages) {
    if (st.window.lo > 1.0) continue;
    CHECK(std::find(times.begin(), times.end(), st.window.lo) != times.end());
    CHECK(std::find(times.begin(), times.end(), st.window.hi) != times.end());
  }
  CHECK(experiment_grid(c, s) == 256);
}

TEST_CASE("zero schedule reproduces single-mode heat dissipation") {
  auto c = parse_config(kSmall);
  c.zero_schedule = true;
  const auto r = run(c);
  REQUIRE(r.rows.size() == 2);
  for (const auto& row : r.rows) {
    const double expect = 0.5 * -std::expm1(-8.0 * oracle::kPi * oracle::kPi * row.nu * row.t_star);
    CHECK(row.theta_dissipation == doctest::Approx(expect).epsilon(1e-12));
    CHECK(row.q_cut == 0);
  }
  CHECK(r.rows[0].nu > r.rows[1].nu);
  CHECK(r.verdict == "vanishing");
}

TEST_CASE("report files") {
  const auto r = run(parse_config(kSmall));
  const auto j = nlohmann::json::parse(report_json(r));
  CHECK(j["rows"].size() == r.rows.size());
  CHECK(j["tag"] == "theoremA");
  CHECK(j["sequences"].size() == 4);
  CHECK_FALSE(j["rows"][0].contains("wall_time"));
  const std::string csv = report_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rows.size()) + 1);
  for (const auto& row : r.rows) {
    CHECK(row.energy_balance_residual <= 1e-10);
    CHECK_FALSE(row.flagged);
    CHECK(row.sup_norm <= 1.0 + 1e-9);
  }

  DissipationReport empty;
  empty.tag = "theoremA";
  empty.config.tag = Tag::HeatCalibration;
  CHECK(nlohmann::json::parse(report_json(empty))["rows"].empty());
  const std::string header = report_csv(empty);
  CHECK(std::count(header.begin(), header.end(), '\n') == 1);
}

TEST_CASE("identical configs give identical reports across thread counts") {
  const auto c = parse_config(kSmall);
  set_thread_count(1);
  const std::string a = report_json(run(c)) + report_csv(run(c));
  set_thread_count(3);
  const std::string b = report_json(run(c)) + report_csv(run(c));
  set_thread_count(0);
  CHECK(a == b);
}

TEST_CASE("vanishing scan") {
  auto c = parse_config(kSmall);
  c.tag = Tag::Vanishing;
  c.nu_list = {0.0};
  const auto zero = run(c);
  REQUIRE(zero.rows.size() == 1);
  CHECK(zero.rows[0].l2_gap_to_theta0 == 0.0);
  CHECK(zero.assertions.empty());

  c.nu_list = {};
  c.q_min = 1;
  c.q_max = 1;
  CHECK(run(c).rows.size() == 1);
}

TEST_CASE("heat calibration runner") {
  auto c = parse_config("[experiment]\ntag = heat_calibration\nheat_nus = 0.25\nheat_dt = 1e-5\n");
  const auto r = run(c);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].theta_dissipation >= 0.25);
  CHECK(r.rows[0].energy_balance_residual < 1e-6);
}

TEST_CASE("out-of-range levels are rejected") {
  auto c = parse_config(kSmall);
  c.q_max = 7;
  CHECK_THROWS_AS(run(c), std::invalid_argument);
}
