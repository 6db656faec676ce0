#include "sjfa/commands.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "sjfa/errors.hpp"
#include "sjfa/fluid.hpp"
#include "sjfa/simulator.hpp"

namespace sjfa {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

fs::path write_manifest(const RunConfig& cfg, const fs::path& dir) {
  const fs::path path = dir / "manifest.json";
  std::ofstream out = open_out(path);
  out << cfg.to_json().dump(2) << '\n';
  return path;
}

std::vector<double> probe_times(const Grid& tgrid) {
  std::vector<double> out;
  const std::size_t stride = std::max<std::size_t>(1, tgrid.size() / 8);
  for (std::size_t k = 0; k < tgrid.size(); k += stride) out.push_back(tgrid[k]);
  if (out.back() != tgrid.back()) out.push_back(tgrid.back());
  return out;
}

void fluid_violations(const FluidSolution& sol, std::vector<std::string>& out) {
  const FluidCheck c = check_fluid(sol);
  double scale = 1.0;
  for (double m : sol.mu) scale = std::max(scale, m);
  if (!(c.consistency <= 1e-9 * scale)) out.push_back("fluid conservation (residual " + format_real(c.consistency) + ")");
  if (!c.nonnegative) out.push_back("fluid nonnegativity");
  if (!c.monotone_in_x) out.push_back("fluid monotonicity in x");
  if (!c.iota_nondecreasing) out.push_back("iota nondecreasing");
}

FluidSolution solve_reference(const RunConfig& cfg, const Model& model) {
  validate_fluid_data(model.alpha, probe_times(cfg.tgrid), cfg.xgrid);
  return solve_fluid(model.alpha, model.service, model.rule, cfg.tgrid, cfg.xgrid, {cfg.fluid_step});
}

}  // namespace

CommandResult cmd_fluid(const RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const Model model = build_model(cfg);
  const FluidSolution sol = solve_reference(cfg, model);
  CommandResult r;
  {
    const fs::path path = out_dir / "fluid.csv";
    std::ofstream out = open_out(path);
    sol.write_csv(out);
    r.files.push_back(path);
  }
  r.files.push_back(write_manifest(cfg, out_dir));
  fluid_violations(sol, r.violations);
  std::ostringstream s;
  s << "fluid: " << sol.times.size() << " x " << sol.xs.size() << " grid, iota(T) = " << format_real(sol.iota.back());
  r.summary = s.str();
  return r;
}

CommandResult cmd_simulate(const RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  const Model model = build_model(cfg);
  const SimConfig sim = sim_config(cfg, model);
  const EventLog log = simulate(sim);
  CommandResult r;
  {
    const fs::path path = out_dir / "events.csv";
    std::ofstream out = open_out(path);
    write_event_log_csv(out, log);
    r.files.push_back(path);
  }
  Grid tgrid = cfg.tgrid;
  const EmpiricalProcesses p = empirical_processes(log, model.rule, tgrid).scaled(cfg.n_scale);
  {
    const fs::path path = out_dir / "empirical.csv";
    std::ofstream out = open_out(path);
    out << "t,x,alpha,beta,xi,iota\n";
    for (std::size_t k = 0; k < tgrid.size(); ++k) {
      const double t = tgrid[k];
      for (double x : cfg.xgrid) {
        out << format_real(t) << ',' << format_real(x) << ',' << format_real(p.alpha.cumulative(t, x)) << ','
            << format_real(p.beta.cumulative(t, x)) << ',' << format_real(p.xi.cumulative(t, x)) << ','
            << format_real(p.iota.values[k]) << '\n';
      }
    }
    r.files.push_back(path);
  }
  r.files.push_back(write_manifest(cfg, out_dir));
  const std::vector<double>& levels = cfg.levels.empty() ? cfg.xgrid : cfg.levels;
  const std::string failed = check_log(log, model.rule, levels).failure();
  if (!failed.empty()) r.violations.push_back(failed);
  std::size_t done = 0;
  for (const Job& j : log.jobs) done += j.theta ? 1 : 0;
  std::ostringstream s;
  s << "simulate: N = " << cfg.n_scale << ", " << log.jobs.size() << " jobs, " << done << " departed";
  r.summary = s.str();
  return r;
}

CommandResult cmd_compare(const RunConfig& cfg, const fs::path& out_dir) {
  if (cfg.fluid_ref.empty()) throw ConfigError("key /compare/fluid_ref is required in compare mode");
  fs::create_directories(out_dir);
  const Model model = build_model(cfg);
  CommandResult r;
  FluidSolution ref;
  if (cfg.fluid_ref == "solve") {
    ref = solve_reference(cfg, model);
    fluid_violations(ref, r.violations);
  } else {
    std::ifstream in(cfg.fluid_ref);
    if (!in) throw ConfigError("cannot open fluid reference " + cfg.fluid_ref);
    ref = FluidSolution::read_csv(in, model.service);
  }
  ConvergenceOptions opts;
  opts.n_list = cfg.n_list;
  opts.replications = cfg.replications;
  opts.threads = cfg.threads;
  const std::vector<DistanceRow> rows = convergence_experiment(sim_config(cfg, model), ref, opts);
  {
    const fs::path path = out_dir / "distances.csv";
    std::ofstream out = open_out(path);
    out << "N,replication,sup_levy_xi,sup_levy_beta,iota_gap\n";
    for (const DistanceRow& row : rows) {
      out << row.n_scale << ',' << row.replication << ',' << format_real(row.sup_levy_xi) << ','
          << format_real(row.sup_levy_beta) << ',' << format_real(row.iota_gap) << '\n';
    }
    r.files.push_back(path);
  }
  r.files.push_back(write_manifest(cfg, out_dir));
  for (const DistanceRow& row : rows) {
    if (!row.invariant_failure.empty()) {
      r.violations.push_back(row.invariant_failure + " (N = " + std::to_string(row.n_scale) + ", replication " +
                             std::to_string(row.replication) + ")");
    }
  }
  std::ostringstream s;
  s << "compare: N, mean sup-Levy xi, mean sup-Levy beta, max iota gap";
  for (const DistanceSummary& d : summarize(rows))
    s << "\n  " << d.n_scale << ", " << format_real(d.mean_xi) << ", " << format_real(d.mean_beta) << ", "
      << format_real(d.max_iota_gap);
  r.summary = s.str();
  return r;
}

CommandResult run_command(const RunConfig& cfg, const fs::path& out_dir) {
  switch (cfg.mode) {
    case Mode::fluid:
      return cmd_fluid(cfg, out_dir);
    case Mode::simulate:
      return cmd_simulate(cfg, out_dir);
    case Mode::compare:
      return cmd_compare(cfg, out_dir);
  }
  throw ConfigError("unknown mode");
}

}  // namespace sjfa
