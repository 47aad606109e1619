// Acceptance suite: one self-contained check per shipping criterion, each
// printed as a single [PASS]/[FAIL] line with its elapsed time and enforced
// runtime budget. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "thmas/config.hpp"
#include "thmas/dynamics.hpp"
#include "thmas/engine.hpp"
#include "thmas/graph.hpp"
#include "thmas/switching.hpp"
#include "thmas/verify.hpp"

namespace {

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<bool(std::string&)> check;
};

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::ldexp(static_cast<double>(rng() >> 11), -53);
}

// Pascal-triangle binomials, independent of combination_count.
unsigned long long pascal(int n, int k) {
  std::vector<unsigned long long> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = i; j >= 1; --j) {
      row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
    }
  }
  return row[static_cast<std::size_t>(k)];
}

// 1. Subset enumeration sizes match the closed-form count.
bool combinatorics(std::string& detail) {
  for (int n = 1; n <= 8; ++n) {
    for (int sigma = 1; sigma <= n; ++sigma) {
      const auto sets = thmas::enumerate_active_sets(n, sigma);
      if (sets.size() != pascal(n, sigma)) {
        detail = "size mismatch at N=" + std::to_string(n) +
                 " sigma=" + std::to_string(sigma);
        return false;
      }
    }
  }
  if (thmas::build_family(3, 2).size() != 3 || thmas::build_family(4, 4).size() != 1) {
    detail = "family sizes disagree with p(3,2)=3, p(4,4)=1";
    return false;
  }
  detail = "all N<=8 exact";
  return true;
}

// 2. Closed-loop matrices are row-stochastic with positive diagonals at
//    0.9x the gain bound, and the bound itself is rejected.
bool matrix_contracts(std::string& detail) {
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    for (int sigma = 1; sigma <= n; ++sigma) {
      const thmas::GraphFamily fam = thmas::build_family(n, sigma);
      const double bound = thmas::max_gain(1.0, fam);
      for (const thmas::DirectedGraph& g : fam.graphs()) {
        const Eigen::MatrixXd L = thmas::laplacian(g);
        const Eigen::MatrixXd P = thmas::closed_loop_matrix(L, 1.0, 0.9 * bound);
        worst = std::max(worst, thmas::row_stochastic_residual(P));
        if (!thmas::is_row_stochastic(P, 1e-12) || !(P.diagonal().minCoeff() > 0.0)) {
          detail = "contract violated at N=" + std::to_string(n) +
                   " sigma=" + std::to_string(sigma);
          return false;
        }
        try {
          thmas::closed_loop_matrix(L, 1.0, bound);
          detail = "gain equal to the bound was accepted";
          return false;
        } catch (const std::domain_error&) {
        }
      }
    }
  }
  std::ostringstream os;
  os << "max row-stochastic residual " << worst;
  detail = os.str();
  return true;
}

// 3. Every shifted full-period product is ergodic and all shifts share the
//    rank-one limit row e_L within 1e-9.
bool proof_machinery(std::string& detail) {
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    Eigen::VectorXd e_L = Eigen::VectorXd::Zero(n + 1);
    e_L(n) = 1.0;
    for (int sigma = 1; sigma <= n; ++sigma) {
      const thmas::GraphFamily fam = thmas::build_family(n, sigma);
      const double k_fb = 0.9 * thmas::max_gain(1.0, fam);
      const auto products = thmas::cycle_products(fam, 1.0, k_fb);
      Eigen::VectorXd first_row;
      for (const thmas::CycleProduct& cp : products) {
        if (!thmas::is_primitive(cp.matrix)) {
          detail = "non-ergodic product at N=" + std::to_string(n) +
                   " sigma=" + std::to_string(sigma) +
                   " shift=" + std::to_string(cp.shift);
          return false;
        }
        const thmas::SubsequenceLimit sl = thmas::rank_one_limit(cp, 1e-9);
        const double to_eL = (sl.limit_row - e_L).cwiseAbs().maxCoeff();
        worst = std::max(worst, to_eL);
        if (to_eL >= 1e-9) {
          detail = "limit row off e_L at N=" + std::to_string(n) +
                   " sigma=" + std::to_string(sigma);
          return false;
        }
        if (cp.shift == 0) {
          first_row = sl.limit_row;
        } else {
          const double spread = (sl.limit_row - first_row).cwiseAbs().maxCoeff();
          worst = std::max(worst, spread);
          if (spread >= 1e-9) {
            detail = "shifted limits disagree at N=" + std::to_string(n) +
                     " sigma=" + std::to_string(sigma);
            return false;
          }
        }
      }
    }
  }
  std::ostringstream os;
  os << "max deviation " << worst;
  detail = os.str();
  return true;
}

thmas::ScenarioConfig desk_config(const std::vector<double>& x0) {
  thmas::ScenarioConfig cfg;
  cfg.name = "desk";
  cfg.N = 3;
  cfg.w = 1.0;
  cfg.k_fb = 0.2;
  cfg.Ts = 1.0;
  cfg.M = 12;  // a multiple of p = 3 with room for the 10*M*p budget
  cfg.x0 = x0;
  cfg.schedule.assign(30, {2, 5.0});  // 30*12 = 10*M*p ticks
  return cfg;
}

// 4. Fixed leader at 5.0: every random start converges below 1e-6 within
//    10*M*p ticks.
bool desk_scale_convergence(std::string& detail) {
  long worst_ticks = 0;
  for (unsigned long long seed = 1; seed <= 20; ++seed) {
    std::vector<double> x0 = thmas::random_initial_state(4, 0.0, 10.0, seed);
    x0[3] = 5.0;
    const auto trace = thmas::run_scenario(desk_config(x0));
    long first = -1;
    for (const thmas::TraceRecord& r : trace) {
      if (r.consensus_error < 1e-6) {
        first = r.k;
        break;
      }
    }
    if (first < 0) {
      detail = "seed " + std::to_string(seed) + " missed 1e-6 within " +
               std::to_string(trace.size()) + " ticks";
      return false;
    }
    worst_ticks = std::max(worst_ticks, first + 1);
  }
  detail = "20 seeds, worst " + std::to_string(worst_ticks) + " of 360 ticks";
  return true;
}

// 5. Control-law stepping and closed-loop-matrix stepping agree to 1e-12.
bool oracle_equivalence(std::string& detail) {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    for (int sigma = 1; sigma <= n; ++sigma) {
      const thmas::GraphFamily fam = thmas::build_family(n, sigma);
      const double k_fb = 0.9 * thmas::max_gain(1.0, fam);
      for (int trial = 0; trial < 100; ++trial) {
        const int gi =
            static_cast<int>(rng() % static_cast<unsigned long long>(fam.size()));
        const thmas::DirectedGraph& g = fam.graph(gi);
        Eigen::VectorXd x(n + 1);
        for (int i = 0; i <= n; ++i) {
          x(i) = uniform(rng, -10.0, 10.0);
        }
        const Eigen::VectorXd u =
            thmas::consensus_input(x, thmas::adjacency_matrix(g), k_fb);
        std::vector<int> q(static_cast<std::size_t>(n), 0);
        for (int a : g.active_followers()) {
          q[static_cast<std::size_t>(a - 1)] = 1;
        }
        const Eigen::VectorXd via_law = thmas::step_followers(x, q, u, 1.0);
        const Eigen::VectorXd via_matrix = thmas::step_closed_loop(
            x, thmas::closed_loop_matrix(thmas::laplacian(g), 1.0, k_fb));
        const double diff = (via_law - via_matrix).cwiseAbs().maxCoeff();
        worst = std::max(worst, diff);
        if (diff > 1e-12) {
          detail = "routes disagree at N=" + std::to_string(n) +
                   " sigma=" + std::to_string(sigma);
          return false;
        }
      }
    }
  }
  std::ostringstream os;
  os << "max route difference " << worst;
  detail = os.str();
  return true;
}

// 6. The leader component is bitwise constant inside every major period of
//    every scenario this suite runs.
bool leader_invariance(std::string& detail) {
  std::vector<std::pair<std::string, thmas::ScenarioConfig>> scenarios;
  std::vector<double> x0 = thmas::random_initial_state(4, 0.0, 10.0, 7);
  x0[3] = 5.0;
  scenarios.emplace_back("desk", desk_config(x0));
  scenarios.emplace_back("mmc", thmas::builtin_scenario("mmc"));
  scenarios.emplace_back("pump", thmas::builtin_scenario("pump"));
  for (const auto& [name, cfg] : scenarios) {
    const auto trace = thmas::run_scenario(cfg);
    for (std::size_t i = 1; i < trace.size(); ++i) {
      const thmas::TraceRecord& prev = trace[i - 1];
      const thmas::TraceRecord& cur = trace[i];
      if (cur.m == prev.m && cur.x(cfg.N) != prev.x(cfg.N)) {
        detail = name + " moved the leader inside period m=" + std::to_string(cur.m);
        return false;
      }
    }
  }
  detail = "fixed-leader, mmc and pump traces";
  return true;
}

// 7. Quantized mmc run: bounded through the sigma change, with a detected
//    limit cycle of amplitude <= |w| around the leader value.
bool mmc_limit_cycle(std::string& detail) {
  const thmas::ScenarioConfig cfg = thmas::builtin_scenario("mmc");
  const auto trace = thmas::run_scenario(cfg);
  const auto series = thmas::consensus_error_series(trace);
  const double w_abs = std::abs(cfg.w);

  std::size_t change = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].active_set.size() != trace[i - 1].active_set.size()) {
      change = i;
      break;
    }
  }
  if (change == 0) {
    detail = "sigma never changed";
    return false;
  }
  double phase1_max = 0.0;
  double phase2_max = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    double& peak = i < change ? phase1_max : phase2_max;
    peak = std::max(peak, series[i]);
  }
  if (phase2_max > phase1_max + w_abs) {
    detail = "sigma change broke boundedness";
    return false;
  }
  // settled band after the change
  const std::size_t half = change + (series.size() - change) / 2;
  double tail_max = 0.0;
  for (std::size_t i = half; i < series.size(); ++i) {
    tail_max = std::max(tail_max, series[i]);
  }
  if (tail_max > 2.0 * w_abs) {
    detail = "settled error exceeds 2|w|";
    return false;
  }
  const thmas::LimitCycleReport lc = thmas::detect_limit_cycle(series, 4 * cfg.M);
  if (!lc.detected || lc.amplitude <= 0.0 || lc.amplitude > w_abs) {
    std::ostringstream os;
    os << "cycle detected=" << lc.detected << " amplitude=" << lc.amplitude
       << " (|w|=" << w_abs << ")";
    detail = os.str();
    return false;
  }
  std::ostringstream os;
  os << "amplitude " << lc.amplitude << " <= |w| = " << w_abs;
  if (lc.period_ticks) {
    os << ", period " << *lc.period_ticks;
  }
  detail = os.str();
  return true;
}

// 8. Pump phases for sigma = 4, 3, 2 each converge below 1e-4 of the leader
//    value; ticks-to-convergence are reported per sigma.
bool pump_convergence(std::string& detail) {
  const thmas::ScenarioConfig cfg = thmas::builtin_scenario("pump");
  const auto trace = thmas::run_scenario(cfg);
  const auto phases = thmas::phase_convergence(trace, 1e-4);
  if (phases.size() != 3) {
    detail = "expected 3 sigma phases, saw " + std::to_string(phases.size());
    return false;
  }
  std::ostringstream os;
  const int expected_sigma[3] = {4, 3, 2};
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const thmas::PhaseReport& phase = phases[i];
    if (phase.sigma != expected_sigma[i] || phase.ticks_to_tol < 0 ||
        phase.final_error >= 1e-4) {
      detail = "phase sigma=" + std::to_string(phase.sigma) + " failed to converge";
      return false;
    }
    if (i > 0) {
      os << ", ";
    }
    os << "sigma=" << phase.sigma << ": " << phase.ticks_to_tol << " ticks";
  }
  detail = os.str();
  return true;
}

// 9. With M a multiple of p, each family graph is selected exactly M/p times
//    per major period.
bool switching_fairness(std::string& detail) {
  const struct {
    int n;
    int sigma;
    int M;
  } cases[] = {{3, 2, 9}, {4, 2, 12}, {4, 3, 12}, {5, 1, 15}};
  for (const auto& c : cases) {
    const int p = static_cast<int>(thmas::combination_count(c.n, c.sigma));
    thmas::ScenarioConfig cfg;
    cfg.N = c.n;
    cfg.w = 1.0;
    cfg.k_fb = 0.2;
    cfg.Ts = 1.0;
    cfg.M = c.M;
    cfg.x0.assign(static_cast<std::size_t>(c.n) + 1, 1.0);
    cfg.x0.back() = 2.0;
    cfg.schedule.assign(4, {c.sigma, 2.0});
    const auto trace = thmas::run_scenario(cfg);
    for (int m = 0; m < 4; ++m) {
      std::map<int, int> counts;
      for (int j = 0; j < c.M; ++j) {
        counts[trace[static_cast<std::size_t>(m * c.M + j)].graph_index]++;
      }
      if (static_cast<int>(counts.size()) != p) {
        detail = "period visited only " + std::to_string(counts.size()) + " of " +
                 std::to_string(p) + " graphs";
        return false;
      }
      for (const auto& [index, count] : counts) {
        if (count != c.M / p) {
          detail = "graph " + std::to_string(index) + " selected " +
                   std::to_string(count) + "x, expected " + std::to_string(c.M / p);
          return false;
        }
      }
    }
  }
  detail = "exact counts over 4 periods per case";
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "subset enumeration matches the closed-form count", 1.0, combinatorics},
      {2, "closed-loop matrices honor the stochasticity contract", 1.0, matrix_contracts},
      {3, "shifted cycle products are ergodic with common limit e_L", 10.0, proof_machinery},
      {4, "fixed-leader consensus reaches 1e-6 within budget (20 seeds)", 5.0,
       desk_scale_convergence},
      {5, "control-law and closed-loop stepping agree to 1e-12", 2.0, oracle_equivalence},
      {6, "leader component is constant between major ticks", 10.0, leader_invariance},
      {7, "quantized mmc run settles into a bounded limit cycle", 5.0, mmc_limit_cycle},
      {8, "pump phases converge below 1e-4 for sigma 4, 3, 2", 5.0, pump_convergence},
      {9, "every family graph is selected exactly M/p times per period", 5.0,
       switching_fairness},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds) {
      ok = false;
      detail += " [over " + std::to_string(criterion.budget_seconds) + "s budget]";
    }
    std::printf("[%s] criterion %d: %s (%s; %.3fs)\n", ok ? "PASS" : "FAIL",
                criterion.id, criterion.title.c_str(), detail.c_str(), elapsed);
    if (!ok) {
      ++failures;
    }
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
