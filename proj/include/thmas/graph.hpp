#pragma once

#include <Eigen/Dense>
#include <vector>

// Directed communication graphs over a set of agents.
//
// Conventions used throughout:
//  - agents are 1-based; followers are 1..N and the leader is N+1,
//  - an edge (receiver, sender) means `receiver` reads the state of `sender`,
//  - the adjacency entry a(i,j) = 1 iff agent i receives from agent j, so the
//    leader row of every graph matrix is zero (the leader listens to nobody).

namespace thmas {

struct Edge {
  int receiver{};
  int sender{};
  auto operator<=>(const Edge&) const = default;
};

// Immutable after construction. The constructor sorts and deduplicates the
// active set and edge list and rejects self-loops, endpoints outside the
// active set, and edges into the leader.
class DirectedGraph {
 public:
  DirectedGraph(int total_agents, std::vector<int> active_followers,
                std::vector<Edge> edges);

  int total_agents() const { return total_agents_; }
  int leader() const { return total_agents_; }
  int num_followers() const { return total_agents_ - 1; }
  const std::vector<int>& active_followers() const { return active_followers_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool operator==(const DirectedGraph&) const = default;

 private:
  int total_agents_;
  std::vector<int> active_followers_;  // sorted, unique
  std::vector<Edge> edges_;            // sorted, unique
};

// (N+1)x(N+1) dense matrices; entries are exact small integers.
Eigen::MatrixXd adjacency_matrix(const DirectedGraph& g);
Eigen::MatrixXd degree_matrix(const DirectedGraph& g);  // diagonal of in-degrees
Eigen::MatrixXd laplacian(const DirectedGraph& g);      // D - A, zero row sums

// True iff every active follower (and the root itself) is reachable from
// `root` along sender->receiver paths. `root` must be the leader or an
// active follower.
bool has_spanning_tree(const DirectedGraph& g, int root);

// Node set and edge set unions; all graphs must agree on total_agents.
// Throws std::invalid_argument on an empty list.
DirectedGraph union_graphs(const std::vector<DirectedGraph>& gs);

// Directed ring over the sorted active set s_1 < ... < s_sigma (receiver is
// the successor, s_sigma wraps to s_1) plus the single leader edge into s_1.
// For sigma = 1 only the leader edge is created. The result always has a
// spanning tree rooted at the leader and max in-degree 2.
DirectedGraph build_ring_subgraph(const std::vector<int>& active_set, int leader);

}  // namespace thmas
