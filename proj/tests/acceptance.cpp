// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "reference.hpp"
#include "sjfa/commands.hpp"
#include "sjfa/config.hpp"
#include "sjfa/examples.hpp"
#include "sjfa/fluid.hpp"
#include "sjfa/oracles.hpp"
#include "sjfa/rng.hpp"
#include "sjfa/simulator.hpp"
#include "sjfa/skorokhod.hpp"

using namespace sjfa;
using oracles::Which;
namespace fs = std::filesystem;

namespace {

// Tolerances pinned here; each criterion reads only these.
constexpr double kOracleTol = 1e-6;
constexpr double kOracleSeconds = 5.0;
constexpr double kTransportTol = 1e-8;
constexpr double kQuadratureTol = 1e-6;
constexpr double kTransportSeconds = 30.0;
constexpr double kBudgetTol = 1e-9;
constexpr double kGuessTol = 1e-6;
constexpr double kXStarTol = 1e-6;
constexpr double kConvergenceBound = 0.05;
constexpr double kConvergenceSeconds = 300.0;
constexpr double kLipschitzSlack = 1e-6;
constexpr double kInvariantTol = 1e-9;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Cell midpoints: away from the kinks of the closed forms.
std::vector<double> probe(double lo, double hi, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * (k + 0.5) / n);
  return v;
}

double wave(double s) {
  const double r = std::fmod(s, 2.0);
  return r <= 1.0 ? 0.5 + r / 2.0 : 1.0 - (r - 1.0) / 2.0;
}

Outcome oracle_equivalence() {
  const Example e = make_example("uniform_linear", {}, 5.0);
  const ServiceProfile mu = ServiceProfile::constant(0.5);
  Grid tgrid;
  for (int k = 1; k <= 100; ++k) tgrid.push_back(1.0 + 4.0 * k / 100.0);
  const Grid xgrid = linspace(-2.0, 2.0, 200);
  const auto start = Clock::now();
  const FluidSolution sol = solve_fluid(e.alpha, mu, e.rule, tgrid, xgrid);
  const double elapsed = seconds_since(start);
  double worst = 0.0;
  for (std::size_t k = 0; k < tgrid.size(); ++k)
    for (std::size_t i = 0; i < xgrid.size(); ++i)
      worst = std::max(worst, std::abs(sol.xi[sol.at(k, i)] - oracles::uniform_linear(tgrid[k], xgrid[i], Which::xi)));
  return {worst < kOracleTol && elapsed < kOracleSeconds,
          "max |xi - closed form| = " + fmt(worst) + " on 100x200, " + fmt(elapsed) + " s"};
}

Outcome transport() {
  const auto start = Clock::now();
  const double eta = 1.2, lambda = 0.1;
  struct Case {
    std::string name;
    std::function<double(double, double)> alpha, alpha_prime;
    AgingRule rule;
    double lo, hi, tol;
  };
  // Triangular has no closed-form alpha'; the arbiter is Simpson quadrature of
  // pi_s[0, x' - s] over [0, t].
  const auto tri_prime = [](double t, double xp) {
    return ref::simpson([&](double s) { return std::clamp(xp - s, 0.0, wave(s)); }, 0.0, t, 20000);
  };
  const std::vector<Case> cases{
      {"uniform_linear", [](double t, double x) { return oracles::uniform_linear(t, x, Which::alpha); },
       [](double t, double x) { return oracles::uniform_linear(t, x, Which::alpha_prime); }, AgingRule::linear(1.0),
       -1.0, 7.0, kTransportTol},
      {"triangular_linear", oracles::triangular_alpha, tri_prime, AgingRule::linear(1.0), -1.0, 7.0, kQuadratureTol},
      {"pareto_linear", [=](double t, double x) { return oracles::pareto_linear(t, x, Which::alpha, eta); },
       [=](double t, double x) { return oracles::pareto_linear(t, x, Which::alpha_prime, eta); },
       AgingRule::linear(1.0), 0.0, 9.0, kTransportTol},
      {"pareto_exponential",
       [=](double t, double x) { return oracles::pareto_exponential(t, x, Which::alpha, eta, lambda); },
       [=](double t, double x) { return oracles::pareto_exponential(t, x, Which::alpha_prime, eta, lambda); },
       AgingRule::exponential(lambda), 0.2, 9.0, kTransportTol},
  };
  Outcome o;
  for (const Case& c : cases) {
    const MeasurePath f = transport_F(MeasurePath::analytic(c.alpha, 5.0), c.rule, Direction::Forward);
    double worst = 0.0;
    for (double t : probe(0.0, 5.0, 50))
      for (double x : probe(c.lo, c.hi, 50)) worst = std::max(worst, std::abs(f.cumulative(t, x) - c.alpha_prime(t, x)));
    o.pass = o.pass && worst < c.tol;
    o.detail += c.name + " " + fmt(worst) + ", ";
  }
  const double elapsed = seconds_since(start);
  o.pass = o.pass && elapsed < kTransportSeconds;
  o.detail += fmt(elapsed) + " s";
  return o;
}

Outcome skorokhod() {
  SplitMix64 rng(1001);
  int mismatches = 0, property_failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 1 + rng() % 200;
    SampledPath psi;
    for (std::size_t i = 0; i < n; ++i) {
      psi.grid.push_back(static_cast<double>(i));
      psi.values.push_back(static_cast<double>(static_cast<int>(rng() % 21) - 10));
    }
    const Reflection r = reflect(psi);
    const std::vector<double> g2 = ref::reflect_gamma2(psi.values);
    for (std::size_t i = 0; i < n; ++i) {
      if (r.gamma2.values[i] != g2[i] || r.gamma1.values[i] != psi.values[i] + g2[i]) ++mismatches;
      if (r.gamma1.values[i] < 0.0 || (i > 0 && r.gamma2.values[i] < r.gamma2.values[i - 1]) ||
          r.gamma1.values[i] != psi.values[i] + r.gamma2.values[i])
        ++property_failures;
    }
  }
  return {mismatches == 0 && property_failures == 0,
          "1000 paths, " + std::to_string(mismatches) + " mismatches, " + std::to_string(property_failures) +
              " property failures"};
}

Outcome mvsp_conditions() {
  const Example e = make_example("uniform_linear", {}, 5.0);
  const ServiceProfile mu = ServiceProfile::constant(0.5);
  const double dt = 0.005;
  const Grid grid = uniform_time_grid(5.0, dt);
  const std::vector<double> levels = linspace(-0.5, 6.5, 141);
  const MeasurePath ap = transport_F(e.alpha, e.rule, Direction::Forward);
  const MvspSolution m = mvsm(ap, mu, levels, grid);
  const MvspCheck c = check_mvsp(m);
  const double max_rate = std::max(e.arrival.rate_bound(), mu.max_rate(5.0));
  const double comp_tol = dt * max_rate;
  const GuessResult g = guess_solution(ap, mu, levels, grid);
  double gap = 0.0;
  for (std::size_t n = 0; n < m.xi_prime.size(); ++n) {
    gap = std::max(gap, std::abs(m.xi_prime[n] - g.solution.xi_prime[n]));
    gap = std::max(gap, std::abs(m.beta_prime_upper[n] - g.solution.beta_prime_upper[n]));
  }
  // The original-plane surface satisfies the same conservation.
  const FluidSolution sol = solve_fluid(e.alpha, mu, e.rule, linspace(0.0, 5.0, 51), linspace(-5.5, 1.5, 141));
  const FluidCheck fc = check_fluid(sol);
  const bool pass = c.conservation < kBudgetTol && c.budget < kBudgetTol && c.complementarity_beta <= comp_tol &&
                    c.complementarity_iota <= comp_tol && c.monotone_in_level && c.beta_upper_nondecreasing &&
                    c.iota_nondecreasing && c.nonnegative && g.valid && gap < kGuessTol &&
                    fc.consistency < kBudgetTol && fc.nonnegative && fc.monotone_in_x && fc.iota_nondecreasing;
  return {pass, "budget " + fmt(c.budget) + ", conservation " + fmt(c.conservation) + ", complementarity " +
                    fmt(std::max(c.complementarity_beta, c.complementarity_iota)) + " (tol " + fmt(comp_tol) +
                    "), guess " + (g.valid ? "valid" : "invalid") + " gap " + fmt(gap)};
}

Outcome x_star_check() {
  const Example e = make_example("uniform_linear", {}, 5.0);
  const MeasurePath ap = transport_F(e.alpha, e.rule, Direction::Forward);
  const ServiceProfile mu = ServiceProfile::constant(0.5);
  double worst = 0.0, prev = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  for (double t : linspace(1.0, 5.0, 401)) {
    const double x = x_star(ap, mu, t);
    worst = std::max(worst, std::abs(x - (t + 1.0) / 2.0));
    monotone = monotone && x >= prev;
    prev = x;
  }
  return {worst < kXStarTol && monotone,
          "max |x* - (t+1)/2| = " + fmt(worst) + (monotone ? ", nondecreasing" : ", NOT nondecreasing")};
}

Outcome convergence() {
  const auto start = Clock::now();
  const Example e = make_example("uniform_linear", {}, 3.0);
  SimConfig base;
  base.arrival = e.arrival;
  base.rule = e.rule;
  base.service = ServiceProfile::constant(0.5);
  base.horizon = 3.0;
  base.seed = 20240601;
  const Grid tgrid = linspace(0.0, 3.0, 31);
  const double dt = tgrid[1] - tgrid[0];
  const FluidSolution ref_sol = solve_fluid(e.alpha, base.service, e.rule, tgrid, linspace(-3.5, 1.5, 401));
  ConvergenceOptions opts;
  opts.n_list = {10, 100, 1000};
  opts.replications = 20;
  opts.threads = std::max(1u, std::thread::hardware_concurrency());
  const std::vector<DistanceRow> rows = convergence_experiment(base, ref_sol, opts);
  const std::vector<DistanceSummary> s = summarize(rows);
  bool iota_ok = true;
  std::string failures;
  for (const DistanceRow& r : rows) {
    iota_ok = iota_ok && r.iota_max <= r.max_job_size / r.n_scale + dt;
    if (!r.invariant_failure.empty()) failures = r.invariant_failure;
  }
  bool decreasing = s.size() == 3;
  for (std::size_t k = 1; k < s.size(); ++k) decreasing = decreasing && s[k].mean_xi < s[k - 1].mean_xi;
  const double last = s.empty() ? 1.0 : s.back().mean_xi;
  const double elapsed = seconds_since(start);
  std::string detail = "mean sup-Levy xi:";
  for (const DistanceSummary& d : s) detail += " N=" + std::to_string(d.n_scale) + " " + fmt(d.mean_xi);
  detail += iota_ok ? ", iota bound holds" : ", iota bound VIOLATED";
  if (!failures.empty()) detail += ", log invariant failed: " + failures;
  detail += ", " + fmt(elapsed) + " s";
  return {decreasing && last < kConvergenceBound && iota_ok && failures.empty() && elapsed < kConvergenceSeconds,
          detail};
}

std::vector<TraceEntry> random_trace(SplitMix64& rng, int n, double horizon) {
  std::vector<TraceEntry> t;
  for (int k = 0; k < n; ++k) {
    // Coarse arrival times so ties occur.
    const double tau = std::floor(horizon * rng.uniform() * 4.0) / 4.0;
    t.push_back({tau, 0.05 + 2.0 * rng.uniform()});
  }
  std::sort(t.begin(), t.end(), [](const TraceEntry& a, const TraceEntry& b) { return a.tau < b.tau; });
  return t;
}

Outcome policy_invariants() {
  SplitMix64 rng(707);
  int failed = 0, order_mismatch = 0;
  std::string first;
  const std::vector<double> levels = linspace(-5.0, 40.0, 91);
  for (int k = 0; k < 100; ++k) {
    const AgingRule rule =
        k % 2 ? AgingRule::linear(2.0 * rng.uniform()) : AgingRule::exponential(0.02 + 0.3 * rng.uniform());
    SimConfig cfg;
    cfg.rule = rule;
    cfg.horizon = 20.0;
    cfg.service = k % 3 ? ServiceProfile::constant(0.5 + rng.uniform())
                        : ServiceProfile::piecewise({0.0, 7.0, 13.0}, {0.5 + rng.uniform(), 1.5, 0.8});
    if (k % 4 == 3) {
      cfg.arrival = InstantaneousArrival::uniform();
      cfg.n_scale = 5 + static_cast<int>(rng() % 20);
      cfg.seed = rng();
    } else {
      cfg.trace = random_trace(rng, 60, 18.0);
    }
    const LogCheck c = check_log(simulate(cfg), rule, levels);
    const std::string f = c.failure(kInvariantTol);
    if (!f.empty()) {
      ++failed;
      if (first.empty()) first = f;
    }
  }
  for (int k = 0; k < 100; ++k) {
    SimConfig cfg;
    cfg.rule = AgingRule::linear(0.0);
    cfg.horizon = 25.0;
    cfg.trace = random_trace(rng, 40, 20.0);
    const EventLog log = simulate(cfg);
    std::vector<std::pair<double, std::size_t>> d;
    for (const Job& j : log.jobs)
      if (j.theta) d.emplace_back(*j.theta, j.index);
    std::sort(d.begin(), d.end());
    std::vector<std::size_t> order;
    for (const auto& p : d) order.push_back(p.second);
    std::vector<ref::SjfJob> jobs;
    for (const TraceEntry& e : cfg.trace) jobs.push_back({e.tau, e.size});
    if (order != ref::sjf_order(jobs, 1.0, 25.0)) ++order_mismatch;
  }
  return {failed == 0 && order_mismatch == 0,
          "100 logs, " + std::to_string(failed) + " invariant failures" + (first.empty() ? "" : " (" + first + ")") +
              "; c=0 vs SJF reference: " + std::to_string(order_mismatch) + " mismatches in 100"};
}

MeasurePath random_atomic_path(SplitMix64& rng, const Grid& grid) {
  std::vector<AtomicMeasure> ms;
  std::vector<Atom> atoms;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    // Occasionally add, move or drop atoms so the path changes in t.
    if (atoms.empty() || rng.uniform() < 0.5) atoms.push_back({4.0 * rng.uniform() - 2.0, rng.uniform()});
    if (rng.uniform() < 0.3) atoms[rng() % atoms.size()].location += 0.5 * rng.uniform() - 0.25;
    if (atoms.size() > 1 && rng.uniform() < 0.2) atoms.erase(atoms.begin() + static_cast<long>(rng() % atoms.size()));
    ms.emplace_back(atoms);
  }
  return MeasurePath::sampled(grid, std::move(ms), 2.0);
}

Outcome lipschitz_bound() {
  SplitMix64 rng(88);
  const AgingRule rule = AgingRule::exponential(0.1);
  const double factor = std::exp(0.1 * 2.0);
  const Grid grid = linspace(0.0, 2.0, 21);
  int violations = 0;
  double worst_ratio = 0.0;
  for (int k = 0; k < 100; ++k) {
    const MeasurePath a = random_atomic_path(rng, grid);
    const MeasurePath b = random_atomic_path(rng, grid);
    const double d = path_distance(a, b, grid);
    const double df =
        path_distance(transport_F(a, rule, Direction::Forward), transport_F(b, rule, Direction::Forward), grid);
    if (df > factor * d + kLipschitzSlack) ++violations;
    if (d > 0.0) worst_ratio = std::max(worst_ratio, df / d);
  }
  return {violations == 0, "100 pairs, " + std::to_string(violations) + " violations, max ratio " + fmt(worst_ratio) +
                               " (bound " + fmt(factor) + ")"};
}

Outcome example_surfaces() {
  Outcome o;
  const fs::path out_root = fs::temp_directory_path() / "sjfa_acceptance_surfaces";
  for (const std::string name : {"uniform_linear", "triangular_linear", "pareto_linear", "pareto_exponential"}) {
    const RunConfig cfg = RunConfig::load(fs::path(SJFA_CONFIG_DIR) / (name + ".json"));
    const fs::path dir = out_root / name;
    fs::remove_all(dir);
    const CommandResult r = cmd_fluid(cfg, dir);
    const Model model = build_model(cfg);
    std::ifstream in(dir / "fluid.csv");
    const FluidSolution sol = FluidSolution::read_csv(in, model.service);

    // Criterion 1 and 4 invariants on the emitted surface. Conservation:
    // xi = Xi(t, x') - mu + beta(x, inf) + iota, zero below x' = 0.
    bool nonneg = true, monotone = true, iota_up = true;
    double conservation = 0.0;
    for (std::size_t k = 0; k < sol.times.size(); ++k) {
      const double t = sol.times[k];
      if (k > 0 && sol.iota[k] < sol.iota[k - 1] - 1e-12) iota_up = false;
      for (std::size_t i = 0; i < sol.xs.size(); ++i) {
        const std::size_t n = sol.at(k, i);
        if (sol.xi[n] < 0.0 || sol.beta_upper[n] < 0.0) nonneg = false;
        if (i > 0 && (sol.xi[n] < sol.xi[n - 1] - 1e-12 || sol.beta_upper[n] > sol.beta_upper[n - 1] + 1e-12))
          monotone = false;
        const double xp = model.rule.trajectory(sol.xs[i], t, 0.0);
        const double expected =
            xp < 0.0 ? 0.0 : big_xi(model.alpha, model.rule, t, xp) - sol.mu[k] + sol.beta_upper[n] + sol.iota[k];
        conservation = std::max(conservation, std::abs(sol.xi[n] - expected));
      }
    }

    // Prime-plane conditions for the same model.
    const double horizon = cfg.horizon;
    const double dt = horizon / 1000.0;
    const Grid grid = uniform_time_grid(horizon, dt);
    std::vector<double> levels = linspace(0.0, 3.0 * horizon + 3.0, 121);
    const MvspSolution m = mvsm(transport_F(model.alpha, model.rule, Direction::Forward), model.service, levels, grid);
    const MvspCheck c = check_mvsp(m);
    const double comp_tol = dt * std::max(model.arrival->rate_bound(), model.service.max_rate(horizon));
    bool pass = r.violations.empty() && nonneg && monotone && iota_up && conservation < kBudgetTol &&
                c.conservation < kBudgetTol && c.budget < kBudgetTol && c.complementarity_beta <= comp_tol &&
                c.complementarity_iota <= comp_tol && c.monotone_in_level && c.beta_upper_nondecreasing &&
                c.iota_nondecreasing && c.nonnegative;
    if (name == "uniform_linear") {
      double worst = 0.0;
      for (std::size_t k = 0; k < sol.times.size(); ++k)
        if (sol.times[k] > 1.0)
          for (std::size_t i = 0; i < sol.xs.size(); ++i)
            worst = std::max(worst, std::abs(sol.xi[sol.at(k, i)] -
                                             oracles::uniform_linear(sol.times[k], sol.xs[i], Which::xi)));
      pass = pass && worst < kOracleTol;
    }
    o.pass = o.pass && pass;
    o.detail += name + (pass ? " ok" : " FAILED") + " (conservation " + fmt(conservation) + ", budget " + fmt(c.budget) +
                ", complementarity " + fmt(std::max(c.complementarity_beta, c.complementarity_iota)) + "), ";
  }
  o.detail.resize(o.detail.size() - 2);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence, uniform/linear", oracle_equivalence},
      {"alpha to alpha' transport", transport},
      {"Skorokhod map against the brute-force oracle", skorokhod},
      {"MVSP budget and complementarity, guess solution", mvsp_conditions},
      {"x* = (t+1)/2", x_star_check},
      {"simulation converges to the fluid limit", convergence},
      {"SJFA policy invariants", policy_invariants},
      {"transport Lipschitz bound", lipschitz_bound},
      {"fluid surfaces for the four examples", example_surfaces},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
