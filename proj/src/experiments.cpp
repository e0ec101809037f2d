#include "adlab/experiments.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>
#include <type_traits>

#include "adlab/errors.hpp"
#include "adlab/nslift.hpp"
#include "adlab/parallel.hpp"
#include "adlab/svg.hpp"
#include "adlab/trajectory_io.hpp"

namespace adlab::experiments {

namespace {

using json = nlohmann::ordered_json;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment",
       {"tag", "q_min", "q_max", "n", "t_end", "checkpoints_per_window", "force_nodes_per_window", "alpha",
        "alpha_prime", "datum_mode", "zero_schedule", "nu_list", "heat_nus", "heat_dt"}},
      {"cascade", {"alpha", "beta", "epsilon", "delta", "sigma", "a0", "depth", "truncated_regime", "t0_target"}},
      {"dt", {"steps_per_window", "diffusion_factor"}},
      {"thresholds",
       {"eps_diss", "diss_conservative", "gap_tol", "tol_slope", "branch_factor", "uniformity_ratio", "energy_tol",
        "sup_tol"}},
      {"profile", {"gain", "window_cap"}},
  };
  return keys;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(std::stod(item.substr(b)));
  }
  return out;
}

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

// Least-squares slope of ln(y) against x; -inf if any y <= 0.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) return -std::numeric_limits<double>::infinity();
    mx += x[i];
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (std::log(y[i]) - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

struct Context {
  const ExperimentConfig& cfg;
  shear::ShearSchedule schedule;
  int n = 0;
  double alpha = 0.0;
  std::vector<double> times;
  std::vector<double> force_nodes;
};

Context make_context(const ExperimentConfig& cfg) {
  Context c{cfg, shear::build_schedule(cascade::build_sequences(cfg.cascade), cfg.profile), 0, 0.0, {}, {}};
  c.n = experiment_grid(cfg, c.schedule);
  c.alpha = cfg.alpha > 0.0 ? cfg.alpha : cfg.cascade.alpha;
  if (!(c.alpha > 0.0 && c.alpha <= 1.0)) throw std::invalid_argument("Hoelder exponent alpha must lie in (0, 1]");
  c.times = stage_aligned_times(c.schedule, cfg.t_end, cfg.checkpoints_per_window);
  c.force_nodes = stage_aligned_times(c.schedule, std::min(1.0, cfg.t_end), cfg.force_nodes_per_window);
  return c;
}

ReportRow evaluate(const Context& c, double nu, int q, int q_cut, const std::string& branch) {
  const auto start = std::chrono::steady_clock::now();
  const auto& seq = c.schedule.sequences;
  const shear::TruncatedField u = shear::truncate(c.schedule, q_cut);
  solver::ScalarStepper cursor(shear::full_field(c.schedule), 0.0, solver::initial_datum(c.n, c.cfg.datum_mode),
                               c.cfg.dt);
  const double gap_limit = std::min(c.cfg.t_end, 1.0 - seq.T_at(q_cut));

  ReportRow row;
  row.branch = branch;
  row.q = q;
  row.q_cut = q_cut;
  row.nu = nu;
  row.n = c.n;

  std::vector<double> ctimes, cvalues;
  solver::SolveOptions opt;
  opt.nu = nu;
  opt.n = c.n;
  opt.checkpoints = c.times;
  opt.dt = c.cfg.dt;
  opt.datum_mode = c.cfg.datum_mode;
  opt.on_checkpoint = [&](std::size_t, double t, const ScalarField& theta) {
    if (t <= gap_limit) {
      cursor.advance_to(t);
      row.l2_gap_to_theta0 = std::max(row.l2_gap_to_theta0, l2_gap(theta, cursor.state()));
    }
    if (t <= 1.0) {
      const shear::ProfileSample p = shear::sample_velocity(u, t, c.n);
      const double cu = p.active ? norms::calpha_norm_1d(p.values, c.alpha) : 0.0;
      ctimes.push_back(t);
      cvalues.push_back(std::max(norms::calpha_norm(theta, c.alpha), cu));
    }
  };
  const solver::Trajectory traj = solver::solve(u, opt);
  const lift::LiftedSolution v = lift::lift(u, traj, nu);

  row.sup_norm = lift::sup_norm(v);
  row.l3_calpha = norms::bochner_norm(ctimes, cvalues, 3.0);
  const norms::ForceNorms fn =
      norms::force_norm(lift::force(u, nu), c.force_nodes, c.n, seq.sigma, c.cfg.alpha_prime);
  row.force_norm = fn.bochner;
  row.force_spacetime = fn.spacetime;

  const double lo = 1.0 - seq.T_at(q), hi = 1.0 - seq.T_at(q + 1);
  std::size_t best = traj.times.size() - 1;
  bool found = false;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t >= lo && t <= hi && (!found || traj.cumulative(i) >= traj.cumulative(best))) {
      best = i;
      found = true;
    }
  }
  row.t_star = traj.times[best];
  row.theta_dissipation = traj.cumulative(best);
  row.total_dissipation = lift::dissipation_3d(v, traj.times.size() - 1).total;

  row.energy_balance_residual = std::max(traj.energy_balance_residual(), norms::energy_balance_check(v));
  for (const auto& e : lift::energy_inequality(v, c.cfg.thresholds.energy_tol))
    row.energy_inequality_ok = row.energy_inequality_ok && e.ok;
  row.flagged = row.energy_balance_residual > c.cfg.thresholds.energy_tol || !row.energy_inequality_ok;
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

struct Job {
  double nu;
  int q;
  int q_cut;
  std::string branch;
};

std::vector<ReportRow> run_jobs(const Context& c, const std::vector<Job>& jobs) {
  std::vector<ReportRow> rows(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::vector<int> kinds(jobs.size(), 0);
  parallel_for(jobs.size(), [&](std::size_t i) {
    try {
      rows[i] = evaluate(c, jobs[i].nu, jobs[i].q, jobs[i].q_cut, jobs[i].branch);
    } catch (const ResolutionError& e) {
      errors[i] = e.what();
      kinds[i] = 3;
    } catch (const InvariantError& e) {
      errors[i] = e.what();
      kinds[i] = 2;
    } catch (const std::exception& e) {
      errors[i] = e.what();
      kinds[i] = 1;
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (kinds[i] == 3) throw ResolutionError(errors[i]);
    if (kinds[i] == 2) throw InvariantError(errors[i]);
    if (kinds[i] == 1) throw std::runtime_error(errors[i]);
  }
  return rows;
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) { return a.nu > b.nu; });
}

void check_range(const ExperimentConfig& cfg) {
  if (cfg.q_min < 0 || cfg.q_max < cfg.q_min || cfg.q_max > cfg.cascade.depth)
    throw std::invalid_argument("q_range must satisfy 0 <= q_min <= q_max <= Q");
}

void add_common_assertions(DissipationReport& r) {
  const auto& th = r.config.thresholds;
  double worst_energy = 0.0, worst_sup = 0.0;
  std::vector<double> nus, l3, force;
  for (const auto& row : r.rows) {
    worst_energy = std::max(worst_energy, row.energy_balance_residual);
    worst_sup = std::max(worst_sup, row.sup_norm);
    nus.push_back(row.nu);
    l3.push_back(row.l3_calpha);
    force.push_back(row.force_norm);
  }
  r.assertions.push_back({"energy_balance", worst_energy <= th.energy_tol, worst_energy, th.energy_tol,
                          "max relative energy-balance residual over rows"});
  r.assertions.push_back(
      {"sup_norm", worst_sup <= 1.0 + th.sup_tol, worst_sup, 1.0 + th.sup_tol, "max ||v_nu||_inf over rows"});
  const norms::Uniformity ul3 = norms::uniformity_scan(nus, l3);
  const norms::Uniformity uf = norms::uniformity_scan(nus, force);
  r.assertions.push_back({"uniformity_L3Calpha", ul3.ratio <= th.uniformity_ratio, ul3.ratio, th.uniformity_ratio,
                          "max/median of ||v_nu||_{L3 C^alpha}"});
  r.assertions.push_back({"uniformity_force", uf.ratio <= th.uniformity_ratio, uf.ratio, th.uniformity_ratio,
                          "max/median of ||F_nu||_{L^{1+sigma} C^sigma}"});
}

json sequences_json(const cascade::ScaleSequences& s) {
  json arr = json::array();
  for (int q = 0; q <= s.depth(); ++q) {
    const auto i = static_cast<std::size_t>(q);
    arr.push_back({{"q", q},
                   {"a_q", s.value(s.a[i])},
                   {"lambda_q", s.value(s.lambda[i])},
                   {"T_q", s.T[i]},
                   {"nu_tilde_q", s.value(s.nu_tilde[i])},
                   {"nu_cons_A_q", s.value(s.nu_cons_A[i])},
                   {"nu_cons_C_q", s.value(s.nu_cons_C[i])}});
  }
  return arr;
}

json config_json(const ExperimentConfig& c) {
  const auto& p = c.cascade;
  const auto& th = c.thresholds;
  return {{"tag", to_string(c.tag)},
          {"cascade",
           {{"alpha", p.alpha},
            {"beta", p.beta},
            {"epsilon", p.epsilon},
            {"delta", p.delta},
            {"sigma", p.sigma},
            {"a0", p.a0},
            {"depth", p.depth},
            {"truncated_regime", p.truncated_regime},
            {"t0_target", p.t0_target}}},
          {"profile", {{"gain", c.profile.gain}, {"window_cap", c.profile.window_cap}}},
          {"dt", {{"steps_per_window", c.dt.steps_per_window}, {"diffusion_factor", c.dt.diffusion_factor}}},
          {"thresholds",
           {{"eps_diss", th.eps_diss},
            {"diss_conservative", th.diss_conservative},
            {"gap_tol", th.gap_tol},
            {"tol_slope", th.tol_slope},
            {"branch_factor", th.branch_factor},
            {"uniformity_ratio", th.uniformity_ratio},
            {"energy_tol", th.energy_tol},
            {"sup_tol", th.sup_tol}}},
          {"q_min", c.q_min},
          {"q_max", c.q_max},
          {"n", c.n},
          {"t_end", c.t_end},
          {"checkpoints_per_window", c.checkpoints_per_window},
          {"force_nodes_per_window", c.force_nodes_per_window},
          {"alpha", c.alpha},
          {"alpha_prime", c.alpha_prime},
          {"datum_mode", c.datum_mode},
          {"zero_schedule", c.zero_schedule}};
}

}  // namespace

const char* to_string(Tag t) {
  switch (t) {
    case Tag::TheoremA: return "theoremA";
    case Tag::DichotomyB: return "dichotomyB";
    case Tag::DichotomyC: return "dichotomyC";
    case Tag::Vanishing: return "vanishing";
    case Tag::HeatCalibration: return "heat_calibration";
  }
  return "?";
}

Tag tag_from_string(const std::string& s) {
  for (Tag t : {Tag::TheoremA, Tag::DichotomyB, Tag::DichotomyC, Tag::Vanishing, Tag::HeatCalibration})
    if (s == to_string(t)) return t;
  throw std::invalid_argument("unknown experiment tag: " + s);
}

ExperimentConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    auto it = known_keys().find(section);
    if (it == known_keys().end()) throw std::invalid_argument("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body)
      if (!it->second.count(key)) throw std::invalid_argument("config: unknown key " + section + "." + key);
  }

  ExperimentConfig c;
  try {
    // get(path, default) swallows conversion errors; this does not.
    auto read = [&tree](const char* path, auto& dst) {
      if (tree.get_optional<std::string>(path)) dst = tree.get<std::decay_t<decltype(dst)>>(path);
    };
    c.tag = tag_from_string(tree.get<std::string>("experiment.tag", "theoremA"));
    read("experiment.q_min", c.q_min);
    read("experiment.q_max", c.q_max);
    read("experiment.n", c.n);
    read("experiment.t_end", c.t_end);
    read("experiment.checkpoints_per_window", c.checkpoints_per_window);
    read("experiment.force_nodes_per_window", c.force_nodes_per_window);
    read("experiment.alpha", c.alpha);
    read("experiment.alpha_prime", c.alpha_prime);
    read("experiment.datum_mode", c.datum_mode);
    read("experiment.zero_schedule", c.zero_schedule);
    if (auto v = tree.get_optional<std::string>("experiment.nu_list")) c.nu_list = parse_list(*v);
    if (auto v = tree.get_optional<std::string>("experiment.heat_nus")) c.heat_nus = parse_list(*v);
    read("experiment.heat_dt", c.heat_dt);

    auto& p = c.cascade;
    read("cascade.alpha", p.alpha);
    read("cascade.beta", p.beta);
    read("cascade.epsilon", p.epsilon);
    read("cascade.delta", p.delta);
    read("cascade.sigma", p.sigma);
    read("cascade.a0", p.a0);
    read("cascade.depth", p.depth);
    read("cascade.truncated_regime", p.truncated_regime);
    read("cascade.t0_target", p.t0_target);

    read("dt.steps_per_window", c.dt.steps_per_window);
    read("dt.diffusion_factor", c.dt.diffusion_factor);

    auto& th = c.thresholds;
    read("thresholds.eps_diss", th.eps_diss);
    read("thresholds.diss_conservative", th.diss_conservative);
    read("thresholds.gap_tol", th.gap_tol);
    read("thresholds.tol_slope", th.tol_slope);
    read("thresholds.branch_factor", th.branch_factor);
    read("thresholds.uniformity_ratio", th.uniformity_ratio);
    read("thresholds.energy_tol", th.energy_tol);
    read("thresholds.sup_tol", th.sup_tol);

    read("profile.gain", c.profile.gain);
    read("profile.window_cap", c.profile.window_cap);
  } catch (const pt::ptree_bad_data& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (c.t_end <= 0.0 || c.t_end > 2.0) throw std::invalid_argument("config: t_end must lie in (0, 2]");
  if (c.checkpoints_per_window < 1 || c.force_nodes_per_window < 1)
    throw std::invalid_argument("config: per-window counts must be positive");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open config");
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_config(text.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

const Assertion* DissipationReport::find(const std::string& name) const {
  for (const auto& a : assertions)
    if (a.name == name) return &a;
  return nullptr;
}

bool DissipationReport::any_flagged() const {
  return std::any_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.flagged; });
}

std::vector<double> stage_aligned_times(const shear::ShearSchedule& schedule, double t_end, int per_window) {
  std::vector<double> pts = {0.0, t_end};
  if (t_end >= 1.0) pts.push_back(1.0);
  for (int q = 0; q < schedule.levels(); ++q)
    for (const auto& iv : {schedule.I[static_cast<std::size_t>(q)], schedule.J[static_cast<std::size_t>(q)]}) {
      pts.push_back(iv.lo);
      pts.push_back(iv.hi);
    }
  for (const auto& st : schedule.stages)
    for (int i = 0; i <= per_window; ++i)
      pts.push_back(i == per_window ? st.window.hi : st.window.lo + st.window.length() * i / per_window);
  std::vector<double> out;
  for (double t : pts)
    if (t >= 0.0 && t <= t_end) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int experiment_grid(const ExperimentConfig& config, const shear::ShearSchedule& schedule) {
  if (config.n > 0) return config.n;
  int floor = 8;
  for (const auto& st : schedule.stages)
    if (st.window.lo < config.t_end && st.level <= config.q_max) floor = std::max(floor, 8 * st.mode);
  int n = 64;
  while (n < floor) n *= 2;
  return n;
}

DissipationReport run_theorem_a(const ExperimentConfig& config) {
  check_range(config);
  const Context c = make_context(config);
  const auto& seq = c.schedule.sequences;
  std::vector<Job> jobs;
  for (int q = config.q_min; q <= config.q_max; ++q)
    jobs.push_back({seq.value(seq.nu_tilde[static_cast<std::size_t>(q)]), q, config.zero_schedule ? 0 : q, "scan"});

  DissipationReport r;
  r.tag = to_string(Tag::TheoremA);
  r.config = config;
  r.rows = run_jobs(c, jobs);

  std::vector<double> qs, diss;
  double min_diss = std::numeric_limits<double>::infinity();
  for (const auto& row : r.rows) {
    qs.push_back(row.q);
    diss.push_back(row.theta_dissipation);
    min_diss = std::min(min_diss, row.theta_dissipation);
  }
  const auto& th = config.thresholds;
  const double slope = log_slope(qs, diss);
  r.assertions.push_back({"min_dissipation", min_diss >= th.eps_diss, min_diss, th.eps_diss,
                          "min over q of 2 nu int_0^t* int |grad theta|^2"});
  r.assertions.push_back({"dissipation_slope", slope >= -th.tol_slope, slope, -th.tol_slope,
                          "least-squares slope of ln(dissipation) against q"});
  add_common_assertions(r);
  const bool nonvanishing = r.find("min_dissipation")->pass && r.find("dissipation_slope")->pass;
  r.verdict = nonvanishing ? "nonvanishing" : "vanishing";
  for (auto& row : r.rows) row.classification = row.theta_dissipation >= th.eps_diss ? "dissipative" : "weak";
  sort_rows(r.rows);
  return r;
}

DissipationReport run_dichotomy(const ExperimentConfig& config, char variant) {
  check_range(config);
  if (variant != 'B' && variant != 'C') throw std::invalid_argument("dichotomy variant must be B or C");
  if (variant == 'C' && config.cascade.beta != 0.0) throw std::invalid_argument("variant C needs beta = 0");
  const Context c = make_context(config);
  const auto& seq = c.schedule.sequences;
  std::vector<Job> jobs;
  for (int q = config.q_min; q <= config.q_max; ++q) {
    const auto i = static_cast<std::size_t>(q);
    const double tilde = seq.value(seq.nu_tilde[i]);
    const double cons = seq.value(variant == 'B' ? seq.nu_cons_A[i] : seq.nu_cons_C[i]);
    const int cut_t = config.zero_schedule ? 0 : seq.truncation_level(tilde);
    const int cut_c = config.zero_schedule ? 0 : seq.truncation_level(cons);
    jobs.push_back({tilde, q, cut_t, "nu_tilde"});
    jobs.push_back({cons, q, cut_c, "nu_cons"});
  }

  DissipationReport r;
  r.tag = variant == 'B' ? to_string(Tag::DichotomyB) : to_string(Tag::DichotomyC);
  r.config = config;
  r.rows = run_jobs(c, jobs);
  const auto& th = config.thresholds;

  bool separated = true;
  double min_tilde = std::numeric_limits<double>::infinity(), max_cons = 0.0;
  std::map<int, double> tilde_by_q, cons_by_q, gap_by_q;
  for (auto& row : r.rows) {
    const bool dissipative = row.theta_dissipation >= th.eps_diss;
    const bool conservative = row.l2_gap_to_theta0 <= th.gap_tol && row.theta_dissipation <= th.diss_conservative;
    row.classification = dissipative ? "dissipative-branch" : (conservative ? "conservative-branch" : "unclassified");
    if (row.branch == "nu_tilde") {
      separated = separated && row.classification == "dissipative-branch";
      min_tilde = std::min(min_tilde, row.theta_dissipation);
      tilde_by_q[row.q] = row.theta_dissipation;
    } else {
      separated = separated && row.classification == "conservative-branch";
      max_cons = std::max(max_cons, row.theta_dissipation);
      cons_by_q[row.q] = row.theta_dissipation;
      gap_by_q[row.q] = row.l2_gap_to_theta0;
    }
  }
  double min_factor = std::numeric_limits<double>::infinity();
  for (const auto& [q, d] : tilde_by_q) min_factor = std::min(min_factor, cons_by_q[q] > 0.0 ? d / cons_by_q[q] : std::numeric_limits<double>::infinity());
  bool gap_monotone = true;
  double worst_gap_step = -std::numeric_limits<double>::infinity();
  for (auto it = gap_by_q.begin(); it != gap_by_q.end(); ++it) {
    auto next = std::next(it);
    if (next == gap_by_q.end()) break;
    worst_gap_step = std::max(worst_gap_step, next->second - it->second);
    gap_monotone = gap_monotone && next->second < it->second;
  }
  std::vector<double> qs, diss;
  for (const auto& [q, d] : tilde_by_q) {
    qs.push_back(q);
    diss.push_back(d);
  }
  const double slope = log_slope(qs, diss);

  r.assertions.push_back({"branch_separation", separated, separated ? 1.0 : 0.0, 1.0,
                          "every nu_tilde row dissipative-branch and every nu_cons row conservative-branch"});
  r.assertions.push_back({"branch_ordering", min_tilde > max_cons, min_tilde - max_cons, 0.0,
                          "min nu_tilde dissipation minus max nu_cons dissipation"});
  r.assertions.push_back({"branch_factor", min_factor >= th.branch_factor, min_factor, th.branch_factor,
                          "min over q of nu_tilde_q dissipation / nu_q dissipation"});
  r.assertions.push_back({"conservative_gap_monotone", gap_monotone, worst_gap_step, 0.0,
                          "largest change of the nu_q L2 gap from q to q+1 (must be negative)"});
  r.assertions.push_back({"dissipative_slope", slope >= -th.tol_slope, slope, -th.tol_slope,
                          "least-squares slope of ln(nu_tilde_q dissipation) against q"});
  add_common_assertions(r);
  bool all = true;
  for (const auto& a : r.assertions) all = all && a.pass;
  r.verdict = all ? "separated" : "not-separated";
  sort_rows(r.rows);
  return r;
}

DissipationReport run_vanishing(const ExperimentConfig& config) {
  check_range(config);
  const auto schedule = shear::build_schedule(cascade::build_sequences(config.cascade), config.profile);
  const auto& seq = schedule.sequences;
  std::vector<double> nus = config.nu_list;
  if (nus.empty())
    for (int q = config.q_min; q <= config.q_max; ++q) nus.push_back(seq.value(seq.nu_tilde[static_cast<std::size_t>(q)]));
  std::sort(nus.begin(), nus.end(), std::greater<>());
  ExperimentConfig grid_cfg = config;
  grid_cfg.t_end = 1.0;
  const int n = experiment_grid(grid_cfg, schedule);

  DissipationReport r;
  r.tag = to_string(Tag::Vanishing);
  r.config = config;
  r.rows.resize(nus.size());
  std::vector<std::string> errors(nus.size());
  parallel_for(nus.size(), [&](std::size_t i) {
    try {
      const auto start = std::chrono::steady_clock::now();
      const solver::VanishingGap g = solver::vanishing_viscosity_gap(nus[i], schedule, n, config.dt);
      ReportRow& row = r.rows[i];
      row.branch = "vanishing";
      row.nu = nus[i];
      row.q = g.q;
      row.q_cut = g.q;
      row.k = g.k;
      row.n = n;
      row.t_of_nu = g.t_of_nu;
      row.l2_gap_to_theta0 = g.gap;
      row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw std::runtime_error(e);
  if (r.rows.size() >= 2) {
    bool decreasing = true;
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < r.rows.size(); ++i) {
      worst = std::max(worst, r.rows[i + 1].l2_gap_to_theta0 - r.rows[i].l2_gap_to_theta0);
      decreasing = decreasing && r.rows[i + 1].l2_gap_to_theta0 <= r.rows[i].l2_gap_to_theta0;
    }
    r.assertions.push_back({"gap_decreasing", decreasing, worst, 0.0,
                            "largest increase of the L2 gap as nu decreases (must be <= 0)"});
  }
  bool all = true;
  for (const auto& a : r.assertions) all = all && a.pass;
  r.verdict = all ? "converging" : "not-converging";
  return r;
}

DissipationReport run_heat_calibration(const ExperimentConfig& config) {
  DissipationReport r;
  r.tag = to_string(Tag::HeatCalibration);
  r.config = config;
  double worst = 0.0;
  bool bound = true;
  for (double nu : config.heat_nus) {
    const auto start = std::chrono::steady_clock::now();
    const solver::HeatCalibration h = solver::heat_counterexample(nu, config.heat_dt);
    ReportRow row;
    row.branch = "heat";
    row.nu = nu;
    row.n = h.n;
    row.total_dissipation = h.analytic;
    row.theta_dissipation = h.numeric;
    row.energy_balance_residual = h.relative_error;
    row.classification = h.lower_bound_ok ? "above-quarter" : "below-quarter";
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    worst = std::max(worst, h.relative_error);
    bound = bound && h.lower_bound_ok;
    r.rows.push_back(row);
  }
  r.assertions.push_back({"closed_form_match", worst <= 1e-6, worst, 1e-6,
                          "relative error of the solver against the closed form"});
  r.assertions.push_back({"lower_bound", bound, bound ? 1.0 : 0.0, 1.0, "dissipation >= 1/4"});
  r.verdict = worst <= 1e-6 && bound ? "calibrated" : "miscalibrated";
  sort_rows(r.rows);
  return r;
}

DissipationReport run(const ExperimentConfig& config) {
  switch (config.tag) {
    case Tag::TheoremA: return run_theorem_a(config);
    case Tag::DichotomyB: return run_dichotomy(config, 'B');
    case Tag::DichotomyC: return run_dichotomy(config, 'C');
    case Tag::Vanishing: return run_vanishing(config);
    case Tag::HeatCalibration: return run_heat_calibration(config);
  }
  throw std::invalid_argument("unknown tag");
}

std::string report_json(const DissipationReport& report) {
  json j;
  j["tag"] = report.tag;
  j["format_version"] = 1;
  j["config"] = config_json(report.config);
  if (report.config.tag != Tag::HeatCalibration) {
    try {
      j["sequences"] = sequences_json(cascade::build_sequences(report.config.cascade));
    } catch (const std::exception&) {
      j["sequences"] = json::array();
    }
  }
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"nu", number_or_null(r.nu)},
                    {"branch", r.branch},
                    {"q", r.q},
                    {"q_cut", r.q_cut},
                    {"n", r.n},
                    {"total_dissipation", number_or_null(r.total_dissipation)},
                    {"theta_dissipation", number_or_null(r.theta_dissipation)},
                    {"t_star", number_or_null(r.t_star)},
                    {"sup_norm", number_or_null(r.sup_norm)},
                    {"L3Calpha", number_or_null(r.l3_calpha)},
                    {"force_norm", number_or_null(r.force_norm)},
                    {"force_spacetime", number_or_null(r.force_spacetime)},
                    {"l2_gap_to_theta0", number_or_null(r.l2_gap_to_theta0)},
                    {"energy_balance_residual", number_or_null(r.energy_balance_residual)},
                    {"energy_inequality_ok", r.energy_inequality_ok},
                    {"t_of_nu", number_or_null(r.t_of_nu)},
                    {"k", r.k},
                    {"classification", r.classification},
                    {"flagged", r.flagged}});
  }
  j["rows"] = rows;
  json asserts = json::array();
  for (const auto& a : report.assertions)
    asserts.push_back({{"name", a.name},
                       {"pass", a.pass},
                       {"value", number_or_null(a.value)},
                       {"threshold", number_or_null(a.threshold)},
                       {"detail", a.detail}});
  j["assertions"] = asserts;
  j["verdict"] = report.verdict;
  return j.dump(2) + "\n";
}

std::string report_csv(const DissipationReport& report) {
  std::ostringstream out;
  out << "nu,branch,q,q_cut,n,total_dissipation,theta_dissipation,t_star,sup_norm,L3Calpha,force_norm,"
         "force_spacetime,l2_gap_to_theta0,energy_balance_residual,t_of_nu,k,classification,flagged\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& r : report.rows) {
    out << num(r.nu) << ',' << r.branch << ',' << r.q << ',' << r.q_cut << ',' << r.n << ','
        << num(r.total_dissipation) << ',' << num(r.theta_dissipation) << ',' << num(r.t_star) << ','
        << num(r.sup_norm) << ',' << num(r.l3_calpha) << ',' << num(r.force_norm) << ',' << num(r.force_spacetime)
        << ',' << num(r.l2_gap_to_theta0) << ',' << num(r.energy_balance_residual) << ',' << num(r.t_of_nu) << ','
        << r.k << ',' << r.classification << ',' << (r.flagged ? 1 : 0) << '\n';
  }
  return out.str();
}

void emit_outputs(const DissipationReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_text(dir / "report.json", report_json(report));
  io::write_text(dir / "report.csv", report_csv(report));

  std::map<std::string, svg::Series> by_branch_q, by_branch_gap;
  svg::Series l3{"L3 C^alpha", {}, {}}, force{"L^{1+s} C^s force", {}, {}}, sup{"sup norm", {}, {}};
  for (const auto& r : report.rows) {
    auto& s = by_branch_q[r.branch];
    s.label = r.branch;
    s.x.push_back(r.q);
    s.y.push_back(r.theta_dissipation);
    auto& g = by_branch_gap[r.branch];
    g.label = r.branch;
    g.x.push_back(r.nu);
    g.y.push_back(r.l2_gap_to_theta0);
    l3.x.push_back(r.nu);
    l3.y.push_back(r.l3_calpha);
    force.x.push_back(r.nu);
    force.y.push_back(r.force_norm);
    sup.x.push_back(r.nu);
    sup.y.push_back(r.sup_norm);
  }
  auto values = [](const std::map<std::string, svg::Series>& m) {
    std::vector<svg::Series> out;
    for (const auto& [k, v] : m) out.push_back(v);
    return out;
  };
  io::write_text(dir / "dissipation_vs_q.svg",
                 svg::line_plot({report.tag + ": dissipation vs q", "q", "2 nu int |grad theta|^2", false, true},
                                values(by_branch_q)));
  io::write_text(dir / "gap_vs_nu.svg",
                 svg::line_plot({report.tag + ": L2 gap to theta_0", "nu", "gap", true, true}, values(by_branch_gap)));
  io::write_text(dir / "norm_vs_nu.svg",
                 svg::line_plot({report.tag + ": norms vs nu", "nu", "norm", true, true}, {l3, force, sup}));

  json timing = json::array();
  for (const auto& r : report.rows) timing.push_back({{"nu", r.nu}, {"branch", r.branch}, {"wall_time", r.wall_time}});
  io::write_text(dir / "timing.json", timing.dump(2) + "\n");
}

}  // namespace adlab::experiments
