#include "sjfa/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <thread>

#include "sjfa/errors.hpp"
#include "sjfa/rng.hpp"

namespace sjfa {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Job make_job(std::size_t index, double tau, double size, const AgingRule& rule) {
  Job j;
  j.index = index;
  j.tau = tau;
  j.size = size;
  j.prime_priority = to_prime(rule, {size, tau}).x;
  return j;
}

struct PriorityKey {
  double prime;
  std::size_t index;
  bool operator<(const PriorityKey& o) const { return prime != o.prime ? prime < o.prime : index < o.index; }
};

}  // namespace

std::vector<Job> generate_arrivals(const SimConfig& cfg) {
  if (cfg.n_scale < 1) throw ConfigError("n_scale must be >= 1");
  if (!(cfg.horizon > 0.0)) throw ConfigError("horizon must be positive");
  std::vector<Job> jobs;
  if (!cfg.trace.empty()) {
    std::vector<TraceEntry> trace = cfg.trace;
    std::stable_sort(trace.begin(), trace.end(), [](const TraceEntry& a, const TraceEntry& b) { return a.tau < b.tau; });
    for (const TraceEntry& e : trace) {
      if (!(e.size > 0.0) || !(e.tau >= 0.0)) throw ConfigError("trace jobs need tau >= 0 and size > 0");
      jobs.push_back(make_job(jobs.size(), e.tau, e.size, cfg.rule));
    }
    return jobs;
  }
  if (!cfg.arrival) return jobs;
  const double n = cfg.n_scale;
  const JobStream stream = cfg.arrival->job_stream(1.0 / n);
  const double bound = n * stream.intensity_bound;
  if (!(bound > 0.0)) return jobs;
  SplitMix64 rng(cfg.seed);
  double s = 0.0;
  while (true) {
    s += rng.exponential(bound);
    if (s > cfg.horizon) break;
    const double accept = rng.uniform();
    const double u = rng.uniform();
    if (accept * bound >= n * stream.intensity(s)) continue;
    jobs.push_back(make_job(jobs.size(), s, stream.size_quantile(s, u), cfg.rule));
  }
  return jobs;
}

EventLog run_sjfa(std::vector<Job> jobs, const ServiceProfile& service, double horizon) {
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    if (jobs[k].index != k) throw ConfigError("job indices must equal their positions");
    if (k > 0 && jobs[k].tau < jobs[k - 1].tau) throw ConfigError("jobs must be sorted by arrival time");
    jobs[k].start.reset();
    jobs[k].theta.reset();
  }
  EventLog log;
  log.service = service;
  log.horizon = horizon;

  std::set<PriorityKey> waiting;
  std::size_t next = 0;
  bool busy = false;
  std::size_t current = 0;
  double end = kInf;
  double idle_from = 0.0;

  const auto admit = [&](double t) {
    const PriorityKey top = *waiting.begin();
    waiting.erase(waiting.begin());
    current = top.index;
    jobs[current].start = t;
    log.order.push_back(current);
    end = service.completion_time(t, jobs[current].size);
    busy = true;
  };

  while (true) {
    const double ta = next < jobs.size() ? jobs[next].tau : kInf;
    if (busy && end < ta) {
      if (end > horizon) break;
      jobs[current].theta = end;
      busy = false;
      if (!waiting.empty()) {
        admit(end);
      } else {
        idle_from = end;
      }
    } else {
      if (ta > horizon) break;
      while (next < jobs.size() && jobs[next].tau == ta) {
        waiting.insert({jobs[next].prime_priority, next});
        ++next;
      }
      if (!busy) {
        if (ta > idle_from) log.idle.emplace_back(idle_from, ta);
        admit(ta);
      }
    }
  }
  if (!busy && horizon > idle_from) log.idle.emplace_back(idle_from, horizon);
  log.jobs = std::move(jobs);
  return log;
}

EventLog simulate(const SimConfig& cfg) {
  return run_sjfa(generate_arrivals(cfg), cfg.service.scaled(cfg.n_scale), cfg.horizon);
}

double EventLog::iota(double t) const {
  double lost = 0.0;
  for (const auto& [from, to] : idle) {
    if (from >= t) break;
    lost += service.cumulative(std::min(to, t)) - service.cumulative(from);
  }
  return lost;
}

double EventLog::effort(double t) const { return service.cumulative(t) - iota(t); }

std::pair<double, double> EventLog::residual(double t) const {
  const auto it = std::upper_bound(order.begin(), order.end(), t,
                                   [this](double v, std::size_t k) { return v < *jobs[k].start; });
  if (it == order.begin()) return {0.0, 0.0};
  const Job& j = jobs[*std::prev(it)];
  if (j.theta && *j.theta <= t) return {0.0, 0.0};
  const double done = service.cumulative(t) - service.cumulative(*j.start);
  return {std::max(0.0, j.size - done), j.size};
}

EmpiricalProcesses EmpiricalProcesses::scaled(double n) const {
  const auto scale_path = [n](const MeasurePath& p) {
    std::vector<AtomicMeasure> ms;
    ms.reserve(p.measures().size());
    for (const AtomicMeasure& m : p.measures()) {
      std::vector<Atom> atoms;
      atoms.reserve(m.size());
      for (std::size_t i = 0; i < m.size(); ++i) atoms.push_back({m.locations()[i], m.mass_at(i) / n});
      ms.emplace_back(std::move(atoms));
    }
    return MeasurePath::sampled(p.grid(), std::move(ms), p.horizon());
  };
  EmpiricalProcesses out{scale_path(alpha), scale_path(beta), scale_path(xi), iota};
  for (double& v : out.iota.values) v /= n;
  return out;
}

EmpiricalProcesses empirical_processes(const EventLog& log, const AgingRule& rule, std::span<const double> tgrid) {
  if (tgrid.empty() || tgrid.front() != 0.0) throw DomainError("empirical grid must start at 0");
  const std::size_t nt = tgrid.size();
  std::vector<std::vector<Atom>> a(nt), b(nt), q(nt);
  for (const Job& j : log.jobs) {
    const auto first = std::lower_bound(tgrid.begin(), tgrid.end(), j.tau);
    if (first == tgrid.end()) continue;
    const std::size_t k0 = static_cast<std::size_t>(first - tgrid.begin());
    const std::vector<double> where = rule.trajectory_along(j.size, j.tau, tgrid.subspan(k0));
    for (std::size_t k = k0; k < nt; ++k) {
      const Atom atom{where[k - k0], j.size};
      a[k].push_back(atom);
      if (j.theta && *j.theta <= tgrid[k]) {
        b[k].push_back(atom);
      } else {
        q[k].push_back(atom);
      }
    }
  }
  const auto to_path = [&](std::vector<std::vector<Atom>>& slices) {
    std::vector<AtomicMeasure> ms;
    ms.reserve(nt);
    for (auto& s : slices) ms.emplace_back(std::move(s));
    return MeasurePath::sampled(Grid(tgrid.begin(), tgrid.end()), std::move(ms), std::max(tgrid.back(), log.horizon));
  };
  SampledPath iota{Grid(tgrid.begin(), tgrid.end()), std::vector<double>(nt)};
  for (std::size_t k = 0; k < nt; ++k) iota.values[k] = log.iota(tgrid[k]);
  return {to_path(a), to_path(b), to_path(q), std::move(iota)};
}

std::string LogCheck::failure(double tol) const {
  if (!priority_order) return "priority order";
  if (!non_idling) return "non-idling";
  if (!departures_valid) return "departure times";
  if (!(work_accounting <= tol)) return "work accounting";
  if (!beta_prime_monotone) return "beta' monotonicity";
  if (!(conservation <= tol)) return "conservation xi = alpha - beta";
  return {};
}

LogCheck check_log(const EventLog& log, const AgingRule& rule, std::span<const double> x_probe) {
  LogCheck c;
  const auto& jobs = log.jobs;
  const ServiceProfile& mu = log.service;
  constexpr double kTol = 1e-9;

  // Sweep admissions in order, keeping the set of jobs that have arrived and wait.
  std::set<PriorityKey> waiting;
  std::size_t next = 0;
  double prev_end = 0.0;
  for (std::size_t pos = 0; pos < log.order.size(); ++pos) {
    const Job& j = jobs[log.order[pos]];
    const double s = *j.start;
    if (s < j.tau || (pos > 0 && s < prev_end - kTol)) c.departures_valid = false;
    // Idle gap before this admission: nothing may have been waiting.
    if (s > prev_end + kTol) {
      const bool someone_waiting = !waiting.empty() || (next < jobs.size() && jobs[next].tau < s - kTol);
      if (someone_waiting) c.non_idling = false;
    }
    while (next < jobs.size() && jobs[next].tau <= s) {
      waiting.insert({jobs[next].prime_priority, next});
      ++next;
    }
    if (waiting.empty() || waiting.begin()->index != j.index) c.priority_order = false;
    waiting.erase({j.prime_priority, j.index});
    if (j.theta) {
      const double done = mu.cumulative(*j.theta) - mu.cumulative(s);
      if (std::abs(done - j.size) > kTol * std::max(1.0, j.size)) c.departures_valid = false;
      prev_end = *j.theta;
    } else {
      prev_end = kInf;
      if (pos + 1 != log.order.size()) c.departures_valid = false;
    }
  }
  // Unadmitted jobs while the server idles at the end.
  if (prev_end < log.horizon - kTol) {
    while (next < jobs.size() && jobs[next].tau <= log.horizon) {
      if (jobs[next].tau < log.horizon - kTol) c.non_idling = false;
      ++next;
    }
  }

  // Work accounting at every event time.
  std::vector<double> events;
  for (const Job& j : jobs) {
    if (j.tau <= log.horizon) events.push_back(j.tau);
    if (j.start) events.push_back(*j.start);
    if (j.theta) events.push_back(*j.theta);
  }
  events.push_back(log.horizon);
  std::sort(events.begin(), events.end());
  std::vector<std::pair<double, double>> departures;  // (theta, size)
  for (const Job& j : jobs)
    if (j.theta) departures.emplace_back(*j.theta, j.size);
  std::sort(departures.begin(), departures.end());
  std::vector<double> done_prefix(departures.size() + 1, 0.0);
  for (std::size_t k = 0; k < departures.size(); ++k) done_prefix[k + 1] = done_prefix[k] + departures[k].second;
  for (double e : events) {
    const auto it = std::upper_bound(departures.begin(), departures.end(), std::make_pair(e, kInf));
    const double beta_total = done_prefix[static_cast<std::size_t>(it - departures.begin())];
    const auto [j_res, s_cur] = log.residual(e);
    const double expected = mu.cumulative(e) - log.iota(e) + j_res - s_cur;
    c.work_accounting = std::max(c.work_accounting, std::abs(beta_total - expected) / std::max(1.0, beta_total));
  }

  // beta'_t(x', inf) at every event time, and xi = alpha - beta on up to 200 of them.
  if (!x_probe.empty()) {
    std::vector<double> tgrid{0.0};
    for (double e : events)
      if (e > tgrid.back() && e <= log.horizon) tgrid.push_back(e);
    std::vector<std::pair<double, std::size_t>> by_theta;
    for (const Job& j : jobs)
      if (j.theta) by_theta.emplace_back(*j.theta, j.index);
    std::sort(by_theta.begin(), by_theta.end());
    std::vector<double> upper(x_probe.size(), 0.0);
    std::vector<double> prev(x_probe.size(), 0.0);
    std::size_t d = 0;
    for (double t : tgrid) {
      for (; d < by_theta.size() && by_theta[d].first <= t; ++d) {
        const Job& j = jobs[by_theta[d].second];
        for (std::size_t i = 0; i < x_probe.size(); ++i)
          if (j.prime_priority > x_probe[i]) upper[i] += j.size;
      }
      for (std::size_t i = 0; i < x_probe.size(); ++i) {
        if (upper[i] < prev[i] - kTol) c.beta_prime_monotone = false;
        prev[i] = upper[i];
      }
    }

    std::vector<double> sample{0.0};
    const std::size_t stride = std::max<std::size_t>(1, tgrid.size() / 200);
    for (std::size_t k = stride; k < tgrid.size(); k += stride) sample.push_back(tgrid[k]);
    const EmpiricalProcesses p = empirical_processes(log, rule, sample);
    for (double t : sample) {
      for (double xp : x_probe) {
        const double x = from_prime(rule, {xp, t}).x;
        const double resid = p.xi.cumulative(t, x) - (p.alpha.cumulative(t, x) - p.beta.cumulative(t, x));
        c.conservation = std::max(c.conservation, std::abs(resid));
      }
    }
  }
  return c;
}

void write_event_log_csv(std::ostream& out, const EventLog& log) {
  out << "i,tau,size,prime_priority,theta\n";
  for (const Job& j : log.jobs) {
    out << j.index << ',' << format_real(j.tau) << ',' << format_real(j.size) << ',' << format_real(j.prime_priority)
        << ',';
    if (j.theta) out << format_real(*j.theta);
    out << '\n';
  }
}

std::vector<TraceEntry> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace file is empty");
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) header.push_back(col);
  }
  const auto column = [&](const std::string& name) -> std::size_t {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError("trace header lacks column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t tau_col = column("tau");
  const std::size_t size_col = column("size");
  std::vector<TraceEntry> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() <= std::max(tau_col, size_col))
      throw ConfigError("trace line " + std::to_string(line_no) + " has too few columns");
    try {
      out.push_back({std::stod(cells[tau_col]), std::stod(cells[size_col])});
    } catch (const std::logic_error&) {
      throw ConfigError("trace line " + std::to_string(line_no) + " is not numeric");
    }
  }
  return out;
}

std::vector<DistanceRow> convergence_experiment(const SimConfig& base, const FluidSolution& fluid_ref,
                                                const ConvergenceOptions& opts) {
  if (opts.n_list.empty() || opts.replications < 1) throw ConfigError("convergence run needs N values and replications");
  if (fluid_ref.times.empty() || fluid_ref.times.front() != 0.0)
    throw ConfigError("fluid reference must start at t = 0");
  const MeasurePath xi_ref = fluid_ref.xi_path();
  const MeasurePath beta_ref = fluid_ref.beta_path();
  const std::vector<double> probe_x = opts.probe_x.empty() ? std::vector<double>(fluid_ref.xs) : opts.probe_x;
  const std::span<const double> times(fluid_ref.times);

  struct Task {
    int n;
    int rep;
  };
  std::vector<Task> tasks;
  for (int n : opts.n_list)
    for (int r = 0; r < opts.replications; ++r) tasks.push_back({n, r});
  std::vector<DistanceRow> rows(tasks.size());

  std::atomic<std::size_t> cursor{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    while (true) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= tasks.size()) return;
      try {
        SimConfig cfg = base;
        cfg.n_scale = tasks[k].n;
        cfg.seed = SplitMix64::derive(base.seed, static_cast<std::uint64_t>(tasks[k].n),
                                      static_cast<std::uint64_t>(tasks[k].rep));
        const EventLog log = simulate(cfg);
        const EmpiricalProcesses p = empirical_processes(log, cfg.rule, times).scaled(cfg.n_scale);
        DistanceRow& row = rows[k];
        row.n_scale = cfg.n_scale;
        row.replication = tasks[k].rep;
        row.seed = cfg.seed;
        row.sup_levy_xi = path_distance(p.xi, xi_ref, times, probe_x);
        row.sup_levy_beta = path_distance(p.beta, beta_ref, times, probe_x);
        for (std::size_t i = 0; i < times.size(); ++i) {
          row.iota_gap = std::max(row.iota_gap, std::abs(p.iota.values[i] - fluid_ref.iota[i]));
          row.iota_max = std::max(row.iota_max, p.iota.values[i]);
        }
        for (const Job& j : log.jobs) row.max_job_size = std::max(row.max_job_size, j.size);
        row.invariant_failure = check_log(log, cfg.rule).failure();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(opts.threads, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<DistanceSummary> summarize(std::span<const DistanceRow> rows) {
  std::map<int, std::vector<const DistanceRow*>> by_n;
  for (const DistanceRow& r : rows) by_n[r.n_scale].push_back(&r);
  std::vector<DistanceSummary> out;
  for (const auto& [n, group] : by_n) {
    DistanceSummary s{n, 0.0, 0.0, 0.0, 0.0, 0.0};
    for (const DistanceRow* r : group) {
      s.mean_xi += r->sup_levy_xi;
      s.mean_beta += r->sup_levy_beta;
      s.max_xi = std::max(s.max_xi, r->sup_levy_xi);
      s.max_beta = std::max(s.max_beta, r->sup_levy_beta);
      s.max_iota_gap = std::max(s.max_iota_gap, r->iota_gap);
    }
    s.mean_xi /= static_cast<double>(group.size());
    s.mean_beta /= static_cast<double>(group.size());
    out.push_back(s);
  }
  return out;
}

}  // namespace sjfa
