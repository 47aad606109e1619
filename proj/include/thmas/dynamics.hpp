#pragma once

#include <Eigen/Dense>
#include <vector>

#include "thmas/switching.hpp"

// Agent state updates and the consensus control law. State vectors have
// length N+1 with the leader in the last slot.

namespace thmas {

// u_i = -k_fb * sum_j a(i,j) * (x_i - x_j), evaluated entry by entry from the
// adjacency matrix. The leader row of A is zero, so u_leader is 0.
Eigen::VectorXd consensus_input(const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                                double k_fb);

// x_i' = x_i + w * q_i * u_i for followers; the leader entry is untouched.
// q holds the N activation flags (0/1).
Eigen::VectorXd step_followers(const Eigen::VectorXd& x, const std::vector<int>& q,
                               const Eigen::VectorXd& u, double w);

// Leader update: returns u_L when the leader flag is set, x_L otherwise.
double step_leader(double x_L, int q_L, double u_L);

// P = I - w * k_fb * L. Throws std::domain_error when the result is not
// row-stochastic with strictly positive diagonal (gain bound violated;
// equality with the bound produces a zero diagonal entry and is rejected).
Eigen::MatrixXd closed_loop_matrix(const Eigen::MatrixXd& L, double w, double k_fb);

// Supremum of admissible feedback gains, 1 / (d_max * w), over a family.
// Throws std::domain_error for w <= 0.
double max_gain(double w, const GraphFamily& family);

// Projects a continuous input onto {-1, 0, 1} by sign; exact zero maps to 0.
int quantize_input(double u);

// x' = P * x.
Eigen::VectorXd step_closed_loop(const Eigen::VectorXd& x, const Eigen::MatrixXd& P);

}  // namespace thmas
