// Acceptance suite: one PASS/FAIL line per criterion, tolerances pinned here.
//
//   acceptance [--expect-fail 6,...] [--results <file>]
//
// Exit status is 0 when every criterion passes except those listed as
// expected failures, which must actually fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "adlab/experiments.hpp"
#include "adlab/parallel.hpp"
#include "adlab/scalarsolver.hpp"
#include "adlab/shearflow.hpp"
#include "adlab/norms.hpp"
#include "oracles.hpp"

using namespace adlab;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances.
constexpr double kHeatRelTol = 1e-6;
constexpr double kHeatDt = 1e-5;
constexpr double kEnergyTol = 1e-6;
constexpr double kInviscidTol = 1e-10;
constexpr double kRegularityGrowth = 1.05;
constexpr double kOrderLo = 3.5, kOrderHi = 4.5;
constexpr double kBranchFactor = 3.0;
constexpr double kSlopeTol = 0.2;
constexpr double kSupTol = 1e-9;
constexpr double kUniformity = 3.0;
constexpr double kBacktrackTol = 1e-8;
constexpr double kHolderRelTol = 1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g(double v) { return fmt("%.6g", v); }

experiments::ExperimentConfig dichotomy_config() {
  auto c = experiments::load_config(fs::path(ADLAB_SOURCE_DIR) / "configs" / "dichotomy_c.ini");
  c.thresholds.branch_factor = kBranchFactor;
  c.thresholds.tol_slope = kSlopeTol;
  c.thresholds.sup_tol = kSupTol;
  c.thresholds.uniformity_ratio = kUniformity;
  c.thresholds.energy_tol = kEnergyTol;
  return c;
}

const experiments::DissipationReport& dichotomy_report() {
  static const experiments::DissipationReport r = experiments::run(dichotomy_config());
  return r;
}

Outcome criterion1() {
  Outcome o{true, ""};
  for (double nu : {0.25, 0.0625, 0.015625}) {
    const auto h = solver::heat_counterexample(nu, kHeatDt);
    const double rel = std::abs(h.numeric - oracle::heat_closed_form()) / oracle::heat_closed_form();
    o.pass = o.pass && rel <= kHeatRelTol && h.numeric >= 0.25;
    o.detail += "nu=" + g(nu) + " value=" + fmt("%.10f", h.numeric) + " rel=" + g(rel) + "; ";
  }
  o.detail += "closed form " + fmt("%.10f", oracle::heat_closed_form());
  return o;
}

Outcome criterion2() {
  const auto cfg = dichotomy_config();
  const auto s = shear::build_schedule(cascade::build_sequences(cfg.cascade), cfg.profile);
  const auto& seq = s.sequences;
  std::vector<double> nus = {0.0};
  for (int q = 0; q <= 3; ++q) {
    nus.push_back(seq.nu_tilde_at(q));
    nus.push_back(seq.value(seq.nu_cons_C[static_cast<std::size_t>(q)]));
    nus.push_back(seq.value(seq.nu_cons_A[static_cast<std::size_t>(q)]));
  }
  double worst = 0.0;
  int solves = 0;
  auto check = [&](double nu, int n) {
    solver::SolveOptions o;
    o.nu = nu;
    o.n = n;
    o.checkpoints = experiments::stage_aligned_times(s, 2.0, 4);
    const int q = nu == 0.0 ? seq.depth() : seq.truncation_level(nu);
    worst = std::max(worst, solver::solve(shear::truncate(s, q), o).energy_balance_residual());
    ++solves;
  };
  for (double nu : nus) check(nu, 512);
  check(seq.nu_tilde_at(3), 1024);
  return {worst <= kEnergyTol, std::to_string(solves) + " solves over [0, 2], max relative residual " + g(worst) +
                                   " (tol " + g(kEnergyTol) + ")"};
}

Outcome criterion3() {
  const auto cfg = dichotomy_config();
  const auto s = shear::build_schedule(cascade::build_sequences(cfg.cascade), cfg.profile);
  solver::SolveOptions o;
  o.n = 512;
  o.checkpoints = experiments::stage_aligned_times(s, 2.0, 8);
  o.store_fields = true;
  const auto traj = solver::solve(shear::full_field(s), o);
  const ScalarField in = solver::initial_datum(o.n);
  double worst = 0.0;
  for (const auto& st : traj.stats) worst = std::max(worst, std::abs(st.l2 - in.l2()) / in.l2());
  const double back = l2_gap(traj.fields.back(), in);
  return {worst <= kInviscidTol && back <= kInviscidTol,
          std::to_string(traj.times.size()) + " checkpoints, max |L2 drift| " + g(worst) + ", ||theta(2) - theta_in|| " +
              g(back)};
}

Outcome criterion4() {
  auto p = dichotomy_config().cascade;
  p.depth = 4;
  const auto s = shear::build_schedule(cascade::build_sequences(p));
  const auto& seq = s.sequences;
  bool ok = s.levels() == 4;
  double c_star = 0.0;
  std::map<std::pair<int, int>, double> best;
  std::string growth;
  for (int q = 0; q < s.levels(); ++q) {
    ok = ok && shear::support_measure(s, q) <= 6.0 * std::pow(seq.a_at(q), seq.gamma);
    ok = ok && seq.T_at(q) - seq.T_at(q + 1) <= 4.0 * std::pow(seq.a_at(q), seq.gamma - seq.gamma * p.delta);
    for (const auto& r : shear::verify_regularity(s, q, 2, 2)) {
      c_star = std::max(c_star, r.ratio);
      const auto key = std::make_pair(r.k, r.l);
      if (q > 0 && r.ratio > kRegularityGrowth * best[key]) {
        ok = false;
        growth += " (k=" + std::to_string(r.k) + ",l=" + std::to_string(r.l) + " grows at q=" + std::to_string(q) + ")";
      }
      best[key] = std::max(best[key], r.ratio);
    }
  }
  return {ok, "q = 0..3: support and increment bounds hold, C* = " + g(c_star) +
                  (growth.empty() ? ", no ratio grows by more than 5%" : growth)};
}

Outcome criterion5() {
  const double nu = 0.0625, exact = oracle::heat_closed_form();
  std::vector<double> err;
  for (double dt : {0.01, 0.005, 0.0025, 0.00125})
    err.push_back(std::abs(solver::heat_counterexample(nu, dt).numeric - exact));
  bool ok = true;
  std::string d = "errors";
  for (double e : err) d += " " + g(e);
  d += "; ratios";
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double r = err[i] / err[i + 1];
    ok = ok && r >= kOrderLo && r <= kOrderHi;
    d += " " + fmt("%.4f", r);
  }
  return {ok, d};
}

Outcome criterion6() {
  const auto& r = dichotomy_report();
  const auto* factor = r.find("branch_factor");
  const auto* gap = r.find("conservative_gap_monotone");
  const auto* slope = r.find("dissipative_slope");
  std::ostringstream d;
  d << "min factor " << g(factor->value) << " (need >= " << g(kBranchFactor) << ")"
    << ", gap monotone " << (gap->pass ? "yes" : "no") << ", log-slope " << g(slope->value) << " (need >= "
    << g(-kSlopeTol) << "); dissipation by q:";
  for (const auto& row : r.rows) d << " " << row.branch << "[q=" << row.q << "]=" << g(row.theta_dissipation);
  return {factor->pass && gap->pass && slope->pass, d.str()};
}

Outcome criterion7() {
  const auto& r = dichotomy_report();
  const auto* sup = r.find("sup_norm");
  const auto* l3 = r.find("uniformity_L3Calpha");
  const auto* f = r.find("uniformity_force");
  return {sup->pass && l3->pass && f->pass, "sup " + fmt("%.15f", sup->value) + ", L3C^alpha max/median " +
                                                g(l3->value) + ", force max/median " + g(f->value) + " (limit " +
                                                g(kUniformity) + ")"};
}

Outcome criterion8() {
  cascade::CascadeParams p = dichotomy_config().cascade;
  const auto s = shear::build_schedule(cascade::build_sequences(p));
  const ScalarField f = ScalarField::sample(64, oracle::smooth_field);
  double worst = 0.0;
  for (const auto& st : s.stages) {
    if (st.level != 0) continue;
    const double t = st.window.lo + 0.05 * st.window.length(), dt = 0.9 * st.window.length();
    worst = std::max(worst, oracle::backtracking_error(solver::advect_exact(f, st, t, dt), st, t, dt, 1000));
  }
  const ScalarField theta = solver::initial_datum(64);
  const double dyadic = norms::holder_seminorm(theta, 1.0 / 3.0);
  const double exhaustive = oracle::exhaustive_holder(theta, 1.0 / 3.0);
  const double rel = std::abs(dyadic - exhaustive) / exhaustive;
  return {worst <= kBacktrackTol && rel <= kHolderRelTol,
          "backtracking max error " + g(worst) + ", Hoelder dyadic vs exhaustive rel " + g(rel)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion9() {
  const auto cfg = dichotomy_config();
  const fs::path base = fs::temp_directory_path() / "adlab_acceptance_determinism";
  const std::vector<std::string> files = {"report.json", "report.csv", "dissipation_vs_q.svg", "gap_vs_nu.svg",
                                          "norm_vs_nu.svg"};
  std::vector<std::string> dumps;
  for (int threads : {1, 4}) {
    set_thread_count(threads);
    const fs::path dir = base / ("threads" + std::to_string(threads));
    experiments::emit_outputs(experiments::run(cfg), dir);
    std::string all;
    for (const auto& f : files) all += slurp(dir / f);
    dumps.push_back(all);
  }
  set_thread_count(0);
  return {dumps[0] == dumps[1] && !dumps[0].empty(),
          "report files under 1 and 4 threads " + std::string(dumps[0] == dumps[1] ? "identical" : "differ") + " (" +
              std::to_string(dumps[0].size()) + " bytes)"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected;
  std::string results_path = "acceptance_results.txt";
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--expect-fail" && i + 1 < argc) {
      std::istringstream in(argv[++i]);
      std::string item;
      while (std::getline(in, item, ',')) expected.insert(std::stoi(item));
    } else if (a == "--results" && i + 1 < argc) {
      results_path = argv[++i];
    } else {
      std::cerr << "usage: acceptance [--expect-fail 6,...] [--results file]\n";
      return 64;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"heat counterexample", criterion1},  {"energy balance", criterion2},  {"inviscid reflection", criterion3},
      {"shear-field contract", criterion4}, {"solver order", criterion5},    {"dichotomy", criterion6},
      {"uniform bounds", criterion7},       {"oracle equivalences", criterion8}, {"determinism", criterion9},
  };

  std::ostringstream log;
  int status = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool xfail = expected.count(id) > 0;
    std::string line = "criterion " + std::to_string(id) + " " + (o.pass ? "PASS" : "FAIL") + " " +
                       criteria[i].first + ": " + o.detail + " [" + fmt("%.1f", secs) + " s]";
    if (xfail) line += o.pass ? " (listed as expected failure but passed)" : " (expected failure)";
    if (o.pass == xfail) status = 1;
    std::cout << line << std::endl;
    log << line << '\n';
  }
  std::ofstream(results_path) << log.str();
  return status;
}
