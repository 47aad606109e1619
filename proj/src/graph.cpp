#include "thmas/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace thmas {

namespace {

bool contains(const std::vector<int>& sorted, int v) {
  return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace

DirectedGraph::DirectedGraph(int total_agents, std::vector<int> active_followers,
                             std::vector<Edge> edges)
    : total_agents_(total_agents),
      active_followers_(std::move(active_followers)),
      edges_(std::move(edges)) {
  if (total_agents_ < 2) {
    throw std::invalid_argument("graph needs at least one follower plus the leader");
  }
  std::sort(active_followers_.begin(), active_followers_.end());
  active_followers_.erase(
      std::unique(active_followers_.begin(), active_followers_.end()),
      active_followers_.end());
  for (int a : active_followers_) {
    if (a < 1 || a >= total_agents_) {
      throw std::invalid_argument("active follower index out of range");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  const int lead = total_agents_;
  for (const Edge& e : edges_) {
    if (e.receiver == e.sender) {
      throw std::invalid_argument("self-loop edge");
    }
    if (e.receiver == lead) {
      throw std::invalid_argument("the leader cannot have incoming edges");
    }
    const bool recv_ok = contains(active_followers_, e.receiver);
    const bool send_ok = e.sender == lead || contains(active_followers_, e.sender);
    if (!recv_ok || !send_ok) {
      throw std::invalid_argument("edge endpoint is neither active nor the leader");
    }
  }
}

Eigen::MatrixXd adjacency_matrix(const DirectedGraph& g) {
  const int n = g.total_agents();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    a(e.receiver - 1, e.sender - 1) = 1.0;
  }
  return a;
}

Eigen::MatrixXd degree_matrix(const DirectedGraph& g) {
  const int n = g.total_agents();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    d(e.receiver - 1, e.receiver - 1) += 1.0;
  }
  return d;
}

Eigen::MatrixXd laplacian(const DirectedGraph& g) {
  return degree_matrix(g) - adjacency_matrix(g);
}

bool has_spanning_tree(const DirectedGraph& g, int root) {
  const bool root_ok =
      root == g.leader() || std::binary_search(g.active_followers().begin(),
                                               g.active_followers().end(), root);
  if (!root_ok) {
    throw std::invalid_argument("root must be the leader or an active follower");
  }
  std::vector<char> seen(static_cast<std::size_t>(g.total_agents()) + 1, 0);
  std::vector<int> stack{root};
  seen[static_cast<std::size_t>(root)] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Edge& e : g.edges()) {
      if (e.sender == u && !seen[static_cast<std::size_t>(e.receiver)]) {
        seen[static_cast<std::size_t>(e.receiver)] = 1;
        stack.push_back(e.receiver);
      }
    }
  }
  for (int a : g.active_followers()) {
    if (!seen[static_cast<std::size_t>(a)]) {
      return false;
    }
  }
  return true;
}

DirectedGraph union_graphs(const std::vector<DirectedGraph>& gs) {
  if (gs.empty()) {
    throw std::invalid_argument("union of an empty graph list");
  }
  const int n = gs.front().total_agents();
  std::vector<int> active;
  std::vector<Edge> edges;
  for (const DirectedGraph& g : gs) {
    if (g.total_agents() != n) {
      throw std::invalid_argument("graphs disagree on the number of agents");
    }
    active.insert(active.end(), g.active_followers().begin(), g.active_followers().end());
    edges.insert(edges.end(), g.edges().begin(), g.edges().end());
  }
  return DirectedGraph(n, std::move(active), std::move(edges));
}

DirectedGraph build_ring_subgraph(const std::vector<int>& active_set, int leader) {
  if (active_set.empty()) {
    throw std::invalid_argument("active set is empty");
  }
  std::vector<int> s = active_set;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.front() < 1 || s.back() >= leader) {
    throw std::invalid_argument("active follower index out of range");
  }
  const int sigma = static_cast<int>(s.size());
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(sigma) + 1);
  if (sigma >= 2) {
    for (int i = 0; i < sigma; ++i) {
      // receiver is the successor around the sorted ring
      edges.push_back({s[static_cast<std::size_t>((i + 1) % sigma)],
                       s[static_cast<std::size_t>(i)]});
    }
  }
  edges.push_back({s.front(), leader});  // leader feeds the lowest active index
  return DirectedGraph(leader, std::move(s), std::move(edges));
}

}  // namespace thmas
