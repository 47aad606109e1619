#include "thmas/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

#include "thmas/config.hpp"
#include "thmas/dynamics.hpp"
#include "thmas/switching.hpp"

namespace thmas {

namespace {

struct FamilyCache {
  GraphFamily family;
  std::vector<Eigen::MatrixXd> adjacency;
};

FamilyCache make_cache(int num_followers, int sigma) {
  GraphFamily family = build_family(num_followers, sigma);
  std::vector<Eigen::MatrixXd> adjacency;
  adjacency.reserve(static_cast<std::size_t>(family.size()));
  for (int i = 0; i < family.size(); ++i) {
    adjacency.push_back(adjacency_matrix(family.graph(i)));
  }
  return {std::move(family), std::move(adjacency)};
}

void append_double(std::string& out, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::vector<TraceRecord> run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const int N = cfg.N;
  Eigen::VectorXd x(N + 1);
  for (int i = 0; i <= N; ++i) {
    x(i) = cfg.x0[static_cast<std::size_t>(i)];
  }

  std::map<int, FamilyCache> families;
  std::vector<TraceRecord> trace;
  trace.reserve(cfg.schedule.size() * static_cast<std::size_t>(cfg.M));
  SwitchState sw;  // sigma_prev = 0 marks "no period yet", so m = 0 resets
  std::vector<int> q(static_cast<std::size_t>(N), 0);

  for (std::size_t m = 0; m < cfg.schedule.size(); ++m) {
    const ScheduleEntry& entry = cfg.schedule[m];
    // Major tick: leader refresh first, then family/index bookkeeping.
    x(N) = step_leader(x(N), 1, cfg.leader_scale * entry.u_L);
    const bool sigma_changed = entry.sigma != sw.sigma_prev;
    auto it = families.find(entry.sigma);
    if (it == families.end()) {
      it = families.emplace(entry.sigma, make_cache(N, entry.sigma)).first;
    }
    const FamilyCache& fc = it->second;

    for (int j = 0; j < cfg.M; ++j) {
      const long k = static_cast<long>(m) * cfg.M + j;
      sw = advance(sw, fc.family, sigma_changed, j == 0);
      const DirectedGraph& g = fc.family.graph(sw.index);
      Eigen::VectorXd u =
          consensus_input(x, fc.adjacency[static_cast<std::size_t>(sw.index)], cfg.k_fb);
      if (cfg.quantized) {
        for (int i = 0; i < N; ++i) {
          u(i) = static_cast<double>(quantize_input(u(i)));
        }
      }
      std::fill(q.begin(), q.end(), 0);
      for (int a : g.active_followers()) {
        q[static_cast<std::size_t>(a - 1)] = 1;
      }
      x = step_followers(x, q, u, cfg.w);
      u(N) = cfg.leader_scale * entry.u_L;  // carried higher-layer input
      double err = 0.0;
      for (int i = 0; i < N; ++i) {
        err = std::max(err, std::abs(x(i) - x(N)));
      }
      trace.push_back({k, static_cast<int>(m), sw.index, g.active_followers(), x,
                       std::move(u), err});
    }
  }
  return trace;
}

bool check_practical_consensus_rate(const ScenarioConfig& cfg) {
  std::set<int> sigmas;
  for (const ScheduleEntry& e : cfg.schedule) {
    sigmas.insert(e.sigma);
  }
  for (int s : sigmas) {
    const unsigned long long p = combination_count(cfg.N, s);
    if (static_cast<unsigned long long>(cfg.M) <
        static_cast<unsigned long long>(cfg.c) * p) {
      return false;
    }
  }
  return true;
}

std::vector<double> consensus_error_series(const std::vector<TraceRecord>& trace) {
  if (trace.empty()) {
    throw std::invalid_argument("empty trace");
  }
  std::vector<double> series;
  series.reserve(trace.size());
  for (const TraceRecord& r : trace) {
    series.push_back(r.consensus_error);
  }
  return series;
}

LimitCycleReport detect_limit_cycle(const std::vector<double>& series, int window,
                                    double tol) {
  if (window < 2 || static_cast<std::size_t>(window) > series.size()) {
    throw std::invalid_argument("window must lie in [2, series length]");
  }
  const std::size_t start = series.size() - static_cast<std::size_t>(window);
  double mx = series[start];
  double mn = series[start];
  for (std::size_t i = start; i < series.size(); ++i) {
    mx = std::max(mx, series[i]);
    mn = std::min(mn, series[i]);
  }
  LimitCycleReport report;
  report.amplitude = (mx - mn) / 2.0;

  const bool converged = mx < tol;
  // Growth test: compare peak levels of the two window halves.
  const std::size_t half = static_cast<std::size_t>(window) / 2;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t i = start; i < start + half; ++i) {
    m1 = std::max(m1, std::abs(series[i]));
  }
  for (std::size_t i = start + half; i < series.size(); ++i) {
    m2 = std::max(m2, std::abs(series[i]));
  }
  const bool diverging = m2 > 1.25 * m1 + tol;
  report.detected = !converged && !diverging;

  if (report.detected) {
    double mean = 0.0;
    for (std::size_t i = start; i < series.size(); ++i) {
      mean += series[i];
    }
    mean /= window;
    int best_lag = 0;
    double best = 0.0;
    for (int lag = 1; lag <= window / 2; ++lag) {
      double r = 0.0;
      for (std::size_t i = start; i + static_cast<std::size_t>(lag) < series.size(); ++i) {
        r += (series[i] - mean) * (series[i + static_cast<std::size_t>(lag)] - mean);
      }
      if (r > best) {
        best = r;
        best_lag = lag;
      }
    }
    if (best_lag > 0) {
      report.period_ticks = best_lag;
    }
  }
  return report;
}

ScenarioConfig builtin_scenario(const std::string& name) {
  if (name == "mmc") {
    // Capacitor-voltage balancing: 4 modules, quantized switching inputs,
    // active count 2 for the first half of the run and 1 afterwards.
    constexpr double kArmCurrent = 80.0;    // A
    constexpr double kCapacitance = 0.4e-3; // F
    constexpr double kTs = 1e-5;            // s
    constexpr int kModules = 4;
    ScenarioConfig cfg;
    cfg.name = "mmc";
    cfg.N = kModules;
    cfg.Ts = kTs;
    cfg.w = kArmCurrent * kModules * kTs / kCapacitance;  // volts per applied step
    cfg.k_fb = 0.2;
    cfg.M = 24;
    cfg.quantized = true;
    cfg.leader_scale = 1.0 / kModules;  // leader tracks the total reference / N
    cfg.x0 = {92.3, 97.1, 104.7, 108.9, 100.0};
    cfg.schedule.reserve(50);
    for (int m = 0; m < 25; ++m) {
      cfg.schedule.push_back({2, 400.0});
    }
    for (int m = 0; m < 25; ++m) {
      cfg.schedule.push_back({1, 400.0});
    }
    return cfg;
  }
  if (name == "pump") {
    // Flow consensus across 4 pumps; continuous inputs, a fresh flow setpoint
    // per phase, active count stepping 4 -> 3 -> 2.
    ScenarioConfig cfg;
    cfg.name = "pump";
    cfg.N = 4;
    cfg.Ts = 1e-3;
    cfg.w = 0.2e3;
    cfg.k_fb = 0.00225;  // 0.9x the stability bound 1/(2w)
    cfg.M = 24;
    cfg.quantized = false;
    cfg.x0 = {20.0, 35.0, 10.0, 25.0, 30.0};
    cfg.schedule.reserve(36);
    for (int m = 0; m < 12; ++m) {
      cfg.schedule.push_back({4, 30.0});
    }
    for (int m = 0; m < 12; ++m) {
      cfg.schedule.push_back({3, 45.0});
    }
    for (int m = 0; m < 12; ++m) {
      cfg.schedule.push_back({2, 25.0});
    }
    return cfg;
  }
  throw std::invalid_argument("unknown builtin scenario: " + name);
}

std::vector<PhaseReport> phase_convergence(const std::vector<TraceRecord>& trace,
                                           double tol) {
  if (trace.empty()) {
    throw std::invalid_argument("empty trace");
  }
  std::vector<PhaseReport> out;
  std::size_t i = 0;
  while (i < trace.size()) {
    const int sigma = static_cast<int>(trace[i].active_set.size());
    PhaseReport phase;
    phase.sigma = sigma;
    phase.start_k = trace[i].k;
    std::size_t j = i;
    while (j < trace.size() &&
           static_cast<int>(trace[j].active_set.size()) == sigma) {
      if (phase.ticks_to_tol < 0 && trace[j].consensus_error < tol) {
        phase.ticks_to_tol = trace[j].k - phase.start_k + 1;
      }
      phase.final_error = trace[j].consensus_error;
      ++j;
    }
    out.push_back(phase);
    i = j;
  }
  return out;
}

std::string trace_csv(const std::vector<TraceRecord>& trace, int num_followers) {
  const int n = num_followers + 1;
  std::string out;
  out.reserve(trace.size() * 64 + 128);
  out += "k,m,graph_index,active_set";
  for (int i = 1; i <= n; ++i) {
    out += ",x_" + std::to_string(i);
  }
  for (int i = 1; i <= n; ++i) {
    out += ",u_" + std::to_string(i);
  }
  out += ",consensus_error\n";
  for (const TraceRecord& r : trace) {
    out += std::to_string(r.k);
    out += ',';
    out += std::to_string(r.m);
    out += ',';
    out += std::to_string(r.graph_index);
    out += ',';
    for (std::size_t i = 0; i < r.active_set.size(); ++i) {
      if (i > 0) {
        out += '|';
      }
      out += std::to_string(r.active_set[i]);
    }
    for (int i = 0; i < n; ++i) {
      out += ',';
      append_double(out, r.x(i));
    }
    for (int i = 0; i < n; ++i) {
      out += ',';
      append_double(out, r.u(i));
    }
    out += ',';
    append_double(out, r.consensus_error);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::vector<TraceRecord>& trace, int num_followers,
                     std::ostream& os) {
  os << trace_csv(trace, num_followers);
}

}  // namespace thmas
