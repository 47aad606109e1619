#include "thmas/dynamics.hpp"

#include <stdexcept>

namespace thmas {

Eigen::VectorXd consensus_input(const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                                double k_fb) {
  const Eigen::Index n = x.size();
  if (A.rows() != n || A.cols() != n) {
    throw std::invalid_argument("state and adjacency dimensions disagree");
  }
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i && A(i, j) != 0.0) {
        acc += A(i, j) * (x(i) - x(j));
      }
    }
    u(i) = -k_fb * acc;
  }
  return u;
}

Eigen::VectorXd step_followers(const Eigen::VectorXd& x, const std::vector<int>& q,
                               const Eigen::VectorXd& u, double w) {
  const Eigen::Index n = x.size();
  if (u.size() != n || static_cast<Eigen::Index>(q.size()) != n - 1) {
    throw std::invalid_argument("state, input and activation dimensions disagree");
  }
  Eigen::VectorXd next = x;
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    if (q[static_cast<std::size_t>(i)] != 0) {
      next(i) += w * u(i);
    }
  }
  return next;
}

double step_leader(double x_L, int q_L, double u_L) {
  return q_L != 0 ? u_L : x_L;
}

Eigen::MatrixXd closed_loop_matrix(const Eigen::MatrixXd& L, double w, double k_fb) {
  if (L.rows() != L.cols()) {
    throw std::invalid_argument("Laplacian must be square");
  }
  const Eigen::Index n = L.rows();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - w * k_fb * L;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(P(i, i) > 0.0)) {
      throw std::domain_error("gain bound violated: closed-loop diagonal is not positive");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (P(i, j) < 0.0) {
        throw std::domain_error("gain bound violated: closed-loop matrix has a negative entry");
      }
    }
  }
  return P;
}

double max_gain(double w, const GraphFamily& family) {
  if (!(w > 0.0)) {
    throw std::domain_error("input scaling w must be positive");
  }
  return 1.0 / (static_cast<double>(family.max_in_degree()) * w);
}

int quantize_input(double u) {
  if (u > 0.0) {
    return 1;
  }
  if (u < 0.0) {
    return -1;
  }
  return 0;
}

Eigen::VectorXd step_closed_loop(const Eigen::VectorXd& x, const Eigen::MatrixXd& P) {
  if (P.rows() != P.cols() || P.cols() != x.size()) {
    throw std::invalid_argument("state and matrix dimensions disagree");
  }
  return P * x;
}

}  // namespace thmas
