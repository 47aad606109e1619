#pragma once

#include <vector>

#include "thmas/graph.hpp"

// Graph families and the periodic index-cycling rule that decides which
// subset of followers is active at each lower-layer tick.

namespace thmas {

// C(n, k) in exact integer arithmetic (n small, fits unsigned long long).
unsigned long long combination_count(int n, int k);

// All size-`sigma` subsets of {1..num_followers} in lexicographic order of
// their sorted element lists. Throws std::domain_error unless
// 1 <= sigma <= num_followers.
std::vector<std::vector<int>> enumerate_active_sets(int num_followers, int sigma);

// The sorted family of all C(N, sigma) ring subgraphs for one active count.
// Immutable after construction; graphs() is ordered like enumerate_active_sets.
class GraphFamily {
 public:
  GraphFamily(int num_followers, int sigma, std::vector<DirectedGraph> graphs);

  int num_followers() const { return num_followers_; }
  int sigma() const { return sigma_; }
  int size() const { return static_cast<int>(graphs_.size()); }  // p
  const DirectedGraph& graph(int i) const { return graphs_.at(static_cast<std::size_t>(i)); }
  const std::vector<DirectedGraph>& graphs() const { return graphs_; }
  int max_in_degree() const { return max_in_degree_; }

 private:
  int num_followers_;
  int sigma_;
  std::vector<DirectedGraph> graphs_;
  int max_in_degree_;
};

GraphFamily build_family(int num_followers, int sigma);

// Cycling position within a family plus the active count of the period the
// state was produced in (0 = no period seen yet).
struct SwitchState {
  int index = 0;
  int sigma_prev = 0;
};

// One scheduler step. Resets to graph 0 when the active count changed at a
// major tick; otherwise advances cyclically, so p consecutive non-reset steps
// visit every family member exactly once. The returned index selects
// family.graph(index).
SwitchState advance(const SwitchState& state, const GraphFamily& family,
                    bool sigma_changed, bool at_major_tick);

}  // namespace thmas
