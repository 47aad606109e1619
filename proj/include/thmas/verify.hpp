#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "json.hpp"
#include "thmas/switching.hpp"

// Numerical certification of the convergence machinery behind the switching
// scheme: row-stochasticity of the closed-loop matrices, ergodicity of the
// shifted full-period products, their common rank-one power limit, and the
// left-eigenvector identity that pins the consensus value to the leader.

namespace thmas {

// Product of one full period of closed-loop matrices, period started at
// position `shift` (rightmost factor is P_shift).
struct CycleProduct {
  int shift{};
  Eigen::MatrixXd matrix;
};

// Common row of the rank-one limit of a cycle product's powers.
struct SubsequenceLimit {
  int shift{};
  Eigen::VectorXd limit_row;
  double residual{};  // max row-to-row deviation at the last iterate
};

bool is_row_stochastic(const Eigen::MatrixXd& P, double tol);

// Largest row-sum deviation from 1 or negative-entry magnitude; 0 for an
// exactly row-stochastic matrix.
double row_stochastic_residual(const Eigen::MatrixXd& P);

// Ergodicity test for a nonnegative matrix: raises P to the Wielandt
// exponent n^2 - 2n + 2 and checks for at least one entrywise strictly
// positive column, which certifies that P^n converges to a rank-one limit.
// Throws std::domain_error on negative entries.
bool is_primitive(const Eigen::MatrixXd& P);

// All p shifted full-period products for one family. Propagates the gain
// violation from closed_loop_matrix.
std::vector<CycleProduct> cycle_products(const GraphFamily& family, double w,
                                         double k_fb);

// Repeated squaring until all rows of the power agree within tol; throws
// std::runtime_error when max_iters squarings are not enough (non-ergodic
// input or too tight a tolerance).
SubsequenceLimit rank_one_limit(const CycleProduct& cp, double tol = 1e-9,
                                int max_iters = 64);

// Max drift of w_vec . x(k) from w_vec . x(0) over a sequence of states.
// With w_vec = e_L on a fixed-leader segment this is exactly 0.
double invariance_check(const std::vector<Eigen::VectorXd>& states,
                        const Eigen::VectorXd& w_vec);

// Deterministic uniform [lo, hi) vector from a seed; bit-reproducible across
// platforms (mt19937_64 raw bits, not distribution-dependent).
std::vector<double> random_initial_state(int n, double lo, double hi,
                                         unsigned long long seed);

struct CertificateCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;  // check-specific figure of merit (0 or small = good)
  std::string detail;
};

struct Certificate {
  int N{};
  int sigma{};
  double w{};
  double k_fb{};
  double tol{};
  bool passed = false;
  std::vector<CertificateCheck> checks;
};

// Runs the whole pipeline for one (N, sigma) family with a fixed leader:
// gain bound, per-graph row-stochasticity, cycle-product ergodicity, common
// rank-one limit equal to e_L, exact leader invariance, simulated convergence
// of all followers to the leader value within tol, and agreement of the
// stride-p subsequence limits with the full-sequence limit. x0 must have
// length N+1 (leader value last). Checks that depend on a failed gain bound
// are reported as skipped failures rather than thrown.
Certificate theorem1_certificate(int N, int sigma, double w, double k_fb,
                                 const std::vector<double>& x0, double tol = 1e-6);

nlohmann::json certificate_json(const Certificate& cert);

}  // namespace thmas
