#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sjfa/aging.hpp"
#include "sjfa/arrival.hpp"
#include "sjfa/fluid.hpp"
#include "sjfa/grid.hpp"
#include "sjfa/measures.hpp"
#include "sjfa/service.hpp"
#include "sjfa/skorokhod.hpp"

namespace sjfa {

struct Job {
  std::size_t index = 0;
  double tau = 0.0;
  double size = 0.0;
  double prime_priority = 0.0;  ///< g_i(0)
  std::optional<double> start;  ///< admission to service
  std::optional<double> theta;  ///< departure; unset when past the horizon
};

struct TraceEntry {
  double tau;
  double size;
};

struct SimConfig {
  int n_scale = 1;
  /// Generated arrivals; ignored when `trace` is nonempty.
  std::optional<InstantaneousArrival> arrival;
  std::vector<TraceEntry> trace;
  ServiceProfile service = ServiceProfile::constant(1.0);
  AgingRule rule = AgingRule::linear(1.0);
  double horizon = 1.0;
  std::uint64_t seed = 1;
};

/// Jobs of the N-th system, sorted by arrival. Generated streams arrive at N
/// times the base job rate (thinning against the rate bound) with sizes from
/// the arrival's job-size law, minimum size 1/N. Traces pass through.
std::vector<Job> generate_arrivals(const SimConfig& cfg);

/// Outcome of one non-preemptive run on [0, horizon].
struct EventLog {
  std::vector<Job> jobs;  ///< by index
  ServiceProfile service = ServiceProfile::constant(1.0);
  double horizon = 0.0;
  /// Idle stretches [from, to) of the server inside [0, horizon].
  std::vector<std::pair<double, double>> idle;
  /// Job indices in admission order.
  std::vector<std::size_t> order;

  /// Lost service capacity mu(t) - T(t).
  double iota(double t) const;
  /// Work done on the job in service at t plus work of completed jobs.
  double effort(double t) const;
  /// Remaining work of the job in service at t (0 when idle) and its size.
  std::pair<double, double> residual(double t) const;
};

/// Serves `jobs` (sorted by tau) at `service`, always admitting the waiting job
/// with the least (prime_priority, index). Arrivals at a departure instant are
/// queued before the next admission.
EventLog run_sjfa(std::vector<Job> jobs, const ServiceProfile& service, double horizon);

/// The full N-th system: generate, then serve at N m(s).
EventLog simulate(const SimConfig& cfg);

struct EmpiricalProcesses {
  MeasurePath alpha;
  MeasurePath beta;
  MeasurePath xi;
  SampledPath iota;

  /// Masses and iota divided by n.
  EmpiricalProcesses scaled(double n) const;
};

/// alpha, beta, xi on `tgrid` (starting at 0) with atoms of mass S_i at
/// g_i(t); iota sampled from the server trace.
EmpiricalProcesses empirical_processes(const EventLog& log, const AgingRule& rule, std::span<const double> tgrid);

struct LogCheck {
  bool priority_order = true;    ///< no waiting job beats the admitted one
  bool non_idling = true;        ///< idle only with nothing waiting
  bool departures_valid = true;  ///< start >= tau, theta = completion of the size
  double work_accounting = 0.0;  ///< |beta[0,inf) - (mu - iota + J - S_in_service)| at events
  bool beta_prime_monotone = true;
  double conservation = 0.0;  ///< |xi - (alpha - beta)| on the probe grid

  /// Name of the first failed invariant, empty when all hold.
  std::string failure(double tol = 1e-9) const;
};

/// Checks the policy and accounting invariants. `x_probe` are priority
/// levels for the conservation and beta' checks on the event times.
LogCheck check_log(const EventLog& log, const AgingRule& rule, std::span<const double> x_probe = {});

/// Event log CSV: i,tau,size,prime_priority,theta (theta blank when unset).
void write_event_log_csv(std::ostream& out, const EventLog& log);
/// Trace CSV with columns tau,size (a leading i column and trailing columns are accepted).
std::vector<TraceEntry> read_trace_csv(std::istream& in);

struct DistanceRow {
  int n_scale = 0;
  int replication = 0;
  std::uint64_t seed = 0;
  double sup_levy_xi = 0.0;
  double sup_levy_beta = 0.0;
  double iota_gap = 0.0;   ///< sup_t |iota^N / N - iota|
  double iota_max = 0.0;   ///< sup_t iota^N / N
  double max_job_size = 0.0;
  std::string invariant_failure;  ///< from check_log, empty when the log is sound
};

struct ConvergenceOptions {
  std::vector<int> n_list;
  int replications = 1;
  unsigned threads = 1;
  /// Knots for the fluid slices in the Levy distance; defaults to the reference's x grid.
  std::vector<double> probe_x;
};

/// Distances of the scaled N-th system from `fluid_ref` at the reference's
/// output times. Replication r of system N uses seed derive(base.seed, N, r).
std::vector<DistanceRow> convergence_experiment(const SimConfig& base, const FluidSolution& fluid_ref,
                                                const ConvergenceOptions& opts);

struct DistanceSummary {
  int n_scale;
  double mean_xi, max_xi, mean_beta, max_beta, max_iota_gap;
};
std::vector<DistanceSummary> summarize(std::span<const DistanceRow> rows);

}  // namespace sjfa
