#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "adlab/cascade.hpp"
#include "adlab/errors.hpp"
#include "adlab/experiments.hpp"
#include "adlab/nslift.hpp"
#include "adlab/norms.hpp"
#include "adlab/scalarsolver.hpp"
#include "adlab/shearflow.hpp"
#include "adlab/trajectory_io.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace adlab;

namespace {

// Desk parameters used when no --config is given.
experiments::ExperimentConfig default_config() {
  experiments::ExperimentConfig c;
  c.cascade.alpha = 0.3;
  c.cascade.beta = 0.0;
  c.cascade.delta = 0.25;
  c.cascade.epsilon = 1e-4;
  c.cascade.a0 = 0.1;
  c.cascade.depth = 3;
  c.cascade.truncated_regime = true;
  return c;
}

experiments::ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? default_config() : experiments::load_config(path);
}

// Writes to <out>/<name> when an output directory is set, else to stdout.
void emit(const std::string& out, const std::string& name, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    io::write_text(fs::path(out) / name, text);
    std::cerr << "wrote " << (fs::path(out) / name).string() << '\n';
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> parse_times(const std::string& s) {
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

int next_pow2(int v) {
  int n = 8;
  while (n < v) n *= 2;
  return n;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adlab: alternating-shear cascades, passive scalars and dissipation experiments"};
  app.require_subcommand(1);
  std::string config_path, out;
  app.add_option("--config", config_path, "INI config ([cascade], [profile], [dt], [experiment], [thresholds])")
      ->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (stdout when omitted, except for solve and run)");

  auto* cascade_cmd = app.add_subcommand("cascade", "scale sequences");
  cascade_cmd->require_subcommand(1);
  cascade_cmd->add_subcommand("print", "sequence table as CSV");

  auto* shear_cmd = app.add_subcommand("shear", "alternating shear schedule");
  shear_cmd->require_subcommand(1);
  auto* dump = shear_cmd->add_subcommand("dump", "profile W(t, .) on n points as CSV");
  double dump_t = 0.0;
  int dump_n = 256;
  dump->add_option("--t", dump_t, "time in [0, 2]")->required();
  dump->add_option("--n", dump_n, "number of sample points")->check(CLI::PositiveNumber);
  auto* verify = shear_cmd->add_subcommand("verify", "regularity-ratio table as CSV");
  int kmax = 2, lmax = 2;
  verify->add_option("--kmax", kmax, "spatial derivative order (<= 4)")->check(CLI::Range(0, 4));
  verify->add_option("--lmax", lmax, "time derivative order (<= 4)")->check(CLI::Range(0, 4));

  auto* solve_cmd = app.add_subcommand("solve", "advection-diffusion solve with stored checkpoints");
  double nu = 0.0;
  int n = 0, q_cut = -1;
  std::string checkpoints;
  solve_cmd->add_option("--nu", nu, "viscosity")->required()->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--n", n, "grid size (power of two); 0 picks the resolution floor");
  solve_cmd->add_option("--checkpoints", checkpoints, "comma-separated times in [0, 2]")->required();
  solve_cmd->add_option("--q", q_cut, "truncation level of u (default: q(nu), or Q for nu = 0)");

  auto* lift_cmd = app.add_subcommand("lift", "Navier-Stokes lift");
  lift_cmd->require_subcommand(1);
  auto* residual = lift_cmd->add_subcommand("residual", "pointwise residual of the lifted solution as JSON");
  int samples = 64;
  residual->add_option("--nu", nu, "viscosity")->required()->check(CLI::PositiveNumber);
  residual->add_option("--samples", samples, "random grid points")->check(CLI::PositiveNumber);
  residual->add_option("--n", n, "grid size; 0 picks the resolution floor");

  auto* norms_cmd = app.add_subcommand("norms", "norms of a stored trajectory as JSON");
  std::string input, kind, reference;
  double alpha = 0.3;
  norms_cmd->add_option("--input", input, "trajectory file written by solve")->required()->check(CLI::ExistingFile);
  norms_cmd->add_option("--kind", kind, "Linf | Calpha | L3Calpha | L1sCsigma | CalphaSpaceTime | L2gap | Dissipation")
      ->required();
  norms_cmd->add_option("--alpha", alpha, "Hoelder exponent in (0, 1]");
  norms_cmd->add_option("--reference", reference, "second trajectory for L2gap")->check(CLI::ExistingFile);
  norms_cmd->add_option("--nu", nu, "viscosity of the force for L1sCsigma");

  auto* run_cmd = app.add_subcommand("run", "experiment from --config; writes report files into --out");

  CLI11_PARSE(app, argc, argv);

  try {
    const experiments::ExperimentConfig cfg = config_from(config_path);

    if (*cascade_cmd) {
      emit(out, "sequences.csv", cascade::sequences_csv(cascade::build_sequences(cfg.cascade)));
      return 0;
    }

    if (*shear_cmd) {
      const auto schedule = shear::build_schedule(cascade::build_sequences(cfg.cascade), cfg.profile);
      if (*dump) {
        const auto p = shear::sample_velocity(schedule, dump_t, dump_n);
        std::ostringstream csv;
        csv << "# t=" << num(dump_t) << " active=" << (p.active ? 1 : 0)
            << " direction=" << (p.active ? shear::to_string(p.direction) : "none") << " level=" << p.level << '\n';
        csv << "y,W\n";
        for (int j = 0; j < dump_n; ++j)
          csv << num(static_cast<double>(j) / dump_n) << ',' << num(p.values[static_cast<std::size_t>(j)]) << '\n';
        emit(out, "profile.csv", csv.str());
      } else {
        emit(out, "regularity.csv", shear::regularity_csv(schedule, kmax, lmax));
      }
      return 0;
    }

    if (*solve_cmd) {
      if (out.empty()) throw std::invalid_argument("solve needs --out");
      const auto schedule = shear::build_schedule(cascade::build_sequences(cfg.cascade), cfg.profile);
      const int depth = schedule.sequences.depth();
      const int q = q_cut >= 0 ? q_cut : (nu == 0.0 ? depth : std::min(depth, schedule.sequences.truncation_level(nu)));
      const auto u = shear::truncate(schedule, q);
      solver::SolveOptions opt;
      opt.nu = nu;
      opt.checkpoints = parse_times(checkpoints);
      opt.n = n > 0 ? n : std::max(64, next_pow2(shear::resolution_floor(schedule, q)));
      opt.dt = cfg.dt;
      opt.store_fields = true;
      opt.datum_mode = cfg.datum_mode;
      const auto traj = solver::solve(u, opt);
      const fs::path bin = fs::path(out) / "trajectory.bin";
      io::write_trajectory(bin, traj);
      std::cerr << "wrote " << bin.string() << " and " << io::sidecar_path(bin).string() << " (n=" << opt.n
                << ", q=" << q << ")\n";
      return 0;
    }

    if (*lift_cmd) {
      const auto schedule = shear::build_schedule(cascade::build_sequences(cfg.cascade), cfg.profile);
      const int q = std::min(schedule.sequences.depth(), schedule.sequences.truncation_level(nu));
      const auto u = shear::truncate(schedule, q);
      const int grid = n > 0 ? n : std::max(64, next_pow2(shear::resolution_floor(schedule, q)));
      const auto r = lift::residual_run(u, nu, grid, cfg.dt, samples);
      json j{{"component_residuals", r.component_residuals},
             {"dt", r.dt},
             {"n", r.n},
             {"nu", r.nu},
             {"t", r.t},
             {"h", r.h},
             {"q", q},
             {"samples", r.samples}};
      emit(out, "residual.json", j.dump(2) + "\n");
      return 0;
    }

    if (*norms_cmd) {
      const norms::Kind k = norms::kind_from_string(kind);
      const auto traj = io::read_trajectory(input);
      if (traj.fields.empty()) throw std::invalid_argument(input + ": no checkpoints");
      norms::NormReport rep;
      rep.kind = k;
      rep.exponent = alpha;
      rep.resolution = traj.n;
      switch (k) {
        case norms::Kind::Linf:
          rep.exponent = 0.0;
          for (const auto& f : traj.fields) rep.value = std::max(rep.value, f.linf());
          break;
        case norms::Kind::Calpha:
          for (const auto& f : traj.fields) rep.value = std::max(rep.value, norms::calpha_norm(f, alpha));
          if (traj.n >= 16) rep.refinement_ratio = norms::refinement_ratio(traj.fields.back(), alpha);
          break;
        case norms::Kind::L3Calpha: {
          std::vector<double> values;
          for (const auto& f : traj.fields) values.push_back(norms::calpha_norm(f, alpha));
          rep.value = norms::bochner_norm(traj.times, values, 3.0);
          break;
        }
        case norms::Kind::CalphaSpaceTime:
          rep.value = norms::spacetime_holder(traj.times, traj.fields, alpha);
          break;
        case norms::Kind::L2gap: {
          if (reference.empty()) throw std::invalid_argument("L2gap needs --reference");
          const auto other = io::read_trajectory(reference);
          const std::size_t m = std::min(other.fields.size(), traj.fields.size());
          rep.exponent = 0.0;
          for (std::size_t i = 0; i < m; ++i) rep.value = std::max(rep.value, l2_gap(traj.fields[i], other.fields[i]));
          break;
        }
        case norms::Kind::Dissipation:
          rep.exponent = 0.0;
          if (traj.cumulative_dissipation.empty()) throw std::invalid_argument(input + ": sidecar CSV missing");
          rep.value = traj.cumulative_dissipation.back();
          break;
        case norms::Kind::L1sCsigma: {
          const auto schedule = shear::build_schedule(cascade::build_sequences(cfg.cascade), cfg.profile);
          const int q = nu == 0.0 ? schedule.sequences.depth()
                                  : std::min(schedule.sequences.depth(), schedule.sequences.truncation_level(nu));
          const double sigma = schedule.sequences.sigma;
          rep.exponent = sigma;
          rep.value = norms::force_norm(lift::force(shear::truncate(schedule, q), nu), traj.times, traj.n, sigma,
                                        cfg.alpha_prime)
                          .bochner;
          break;
        }
      }
      json j{{"kind", norms::to_string(rep.kind)},
             {"value", rep.value},
             {"exponent", rep.exponent},
             {"resolution", rep.resolution},
             {"refinement_ratio", rep.refinement_ratio ? json(*rep.refinement_ratio) : json(nullptr)}};
      emit(out, "norms.json", j.dump(2) + "\n");
      return 0;
    }

    if (*run_cmd) {
      if (config_path.empty() || out.empty()) throw std::invalid_argument("run needs --config and --out");
      const auto report = experiments::run(cfg);
      experiments::emit_outputs(report, out);
      for (const auto& a : report.assertions)
        std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << " value=" << num(a.value)
                  << " threshold=" << num(a.threshold) << '\n';
      std::cout << "verdict: " << report.verdict << '\n';
      if (report.any_flagged()) {
        std::cerr << "error: at least one row violates the energy balance tolerance\n";
        return 2;
      }
      return 0;
    }
  } catch (const ResolutionError& e) {
    std::cerr << "resolution error: " << e.what() << '\n';
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
