#include "thmas/switching.hpp"

#include <numeric>
#include <stdexcept>

namespace thmas {

unsigned long long combination_count(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    return 0;
  }
  if (k > n - k) {
    k = n - k;
  }
  unsigned long long c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<unsigned long long>(n - k + i) / static_cast<unsigned long long>(i);
  }
  return c;
}

std::vector<std::vector<int>> enumerate_active_sets(int num_followers, int sigma) {
  if (num_followers < 1) {
    throw std::domain_error("need at least one follower");
  }
  if (sigma < 1 || sigma > num_followers) {
    throw std::domain_error("active count must satisfy 1 <= sigma <= N");
  }
  std::vector<std::vector<int>> out;
  out.reserve(combination_count(num_followers, sigma));
  std::vector<int> cur(static_cast<std::size_t>(sigma));
  std::iota(cur.begin(), cur.end(), 1);
  while (true) {
    out.push_back(cur);
    int i = sigma - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == num_followers - (sigma - 1 - i)) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < sigma; ++j) {
      cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

GraphFamily::GraphFamily(int num_followers, int sigma, std::vector<DirectedGraph> graphs)
    : num_followers_(num_followers), sigma_(sigma), graphs_(std::move(graphs)), max_in_degree_(0) {
  const unsigned long long expected = combination_count(num_followers_, sigma_);
  if (expected == 0 || graphs_.size() != expected) {
    throw std::invalid_argument("family size does not match the subset count");
  }
  const int lead = num_followers_ + 1;
  for (std::size_t i = 0; i < graphs_.size(); ++i) {
    const DirectedGraph& g = graphs_[i];
    if (g.total_agents() != lead ||
        static_cast<int>(g.active_followers().size()) != sigma_) {
      throw std::invalid_argument("family graph has the wrong shape");
    }
    if (!has_spanning_tree(g, lead)) {
      throw std::invalid_argument("family graph lacks a spanning tree from the leader");
    }
    if (i > 0 && graphs_[i - 1].active_followers() == g.active_followers()) {
      throw std::invalid_argument("family graphs must have distinct active sets");
    }
    Eigen::MatrixXd d = degree_matrix(g);
    max_in_degree_ = std::max(max_in_degree_, static_cast<int>(d.diagonal().maxCoeff()));
  }
}

GraphFamily build_family(int num_followers, int sigma) {
  auto sets = enumerate_active_sets(num_followers, sigma);
  std::vector<DirectedGraph> graphs;
  graphs.reserve(sets.size());
  for (const auto& s : sets) {
    graphs.push_back(build_ring_subgraph(s, num_followers + 1));
  }
  return GraphFamily(num_followers, sigma, std::move(graphs));
}

SwitchState advance(const SwitchState& state, const GraphFamily& family,
                    bool sigma_changed, bool at_major_tick) {
  SwitchState next;
  next.sigma_prev = family.sigma();
  if (sigma_changed && at_major_tick) {
    next.index = 0;
  } else {
    next.index = (state.index + 1) % family.size();
  }
  return next;
}

}  // namespace thmas
