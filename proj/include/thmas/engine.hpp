#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Multi-rate simulation driver: the higher layer fixes (sigma, u_L) once per
// major tick, the lower layer runs M minor ticks of graph switching and
// consensus updates per major tick.

namespace thmas {

// One higher-layer decision, applied at major tick m.
struct ScheduleEntry {
  int sigma{};
  double u_L{};
  bool operator==(const ScheduleEntry&) const = default;
};

struct ScenarioConfig {
  std::string name;              // optional label
  int N = 0;                     // follower count
  double w = 1.0;                // per-step input scaling (application units)
  double k_fb = 0.0;             // feedback gain
  double Ts = 1.0;               // lower-layer sampling period [s]
  int M = 1;                     // minor ticks per major tick
  bool quantized = false;        // project follower inputs onto {-1,0,1}
  int c = 3;                     // practical-consensus multiple (M >= c*p)
  double leader_scale = 1.0;     // leader state = leader_scale * u_L
  std::vector<double> x0;        // initial states, length N+1 (leader last)
  std::vector<ScheduleEntry> schedule;  // one entry per major tick

  bool operator==(const ScenarioConfig&) const = default;
};

// Snapshot taken after each minor tick k; x is the post-update state.
struct TraceRecord {
  long k{};
  int m{};
  int graph_index{};
  std::vector<int> active_set;
  Eigen::VectorXd x;
  Eigen::VectorXd u;        // applied inputs; leader slot carries the scaled u_L
  double consensus_error{}; // max_i |x_i - x_L| over followers
};

struct LimitCycleReport {
  bool detected = false;
  double amplitude = 0.0;            // half peak-to-peak over the window
  std::optional<int> period_ticks;   // autocorrelation estimate when detected
};

// Convergence bookkeeping for one maximal run of major ticks with equal sigma.
struct PhaseReport {
  int sigma{};
  long start_k{};
  long ticks_to_tol{-1};  // minor ticks from phase start until error < tol, -1 if never
  double final_error{};
};

// Runs the full schedule. Per major tick: leader refresh, family rebuild and
// switch reset iff sigma changed; per minor tick: scheduler advance, control
// law (optionally quantized), follower step, one TraceRecord. Deterministic
// for a fixed config. Throws ConfigValidationError on an invalid config.
std::vector<TraceRecord> run_scenario(const ScenarioConfig& cfg);

// True iff M >= c * p(sigma) for every sigma appearing in the schedule, i.e.
// each major period cycles through its whole graph family at least c times.
bool check_practical_consensus_rate(const ScenarioConfig& cfg);

// Per-tick max_i |x_i - x_L|. Throws std::invalid_argument on an empty trace.
std::vector<double> consensus_error_series(const std::vector<TraceRecord>& trace);

// Inspects the trailing `window` samples: detected iff the series neither
// converged below tol nor grows; amplitude is (max-min)/2 over the window and
// the period is the best autocorrelation lag when detected.
LimitCycleReport detect_limit_cycle(const std::vector<double>& series, int window,
                                    double tol = 1e-9);

// Built-in benchmark configs: "mmc" (quantized capacitor-voltage balancing,
// sigma 2 -> 1) and "pump" (continuous flow consensus, sigma 4 -> 3 -> 2).
ScenarioConfig builtin_scenario(const std::string& name);

// Groups the trace into maximal equal-sigma phases and reports how many minor
// ticks each phase needed to bring the consensus error below tol.
std::vector<PhaseReport> phase_convergence(const std::vector<TraceRecord>& trace,
                                           double tol);

// CSV emission, one row per minor tick:
//   k,m,graph_index,active_set,x_1..x_{N+1},u_1..u_{N+1},consensus_error
// active_set is |-joined; doubles are written round-trip exact.
void write_trace_csv(const std::vector<TraceRecord>& trace, int num_followers,
                     std::ostream& os);
std::string trace_csv(const std::vector<TraceRecord>& trace, int num_followers);

}  // namespace thmas
