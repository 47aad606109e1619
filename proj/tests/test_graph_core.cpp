#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <stdexcept>
#include <vector>

#include "test_util.hpp"
#include "thmas/graph.hpp"

using thmas::DirectedGraph;
using thmas::Edge;

namespace {

// Independent reachability oracle: transitive closure over sender->receiver.
bool reachability_oracle(const DirectedGraph& g, int root) {
  const int n = g.total_agents();
  std::vector<std::vector<char>> reach(static_cast<std::size_t>(n) + 1,
                                       std::vector<char>(static_cast<std::size_t>(n) + 1, 0));
  for (int v = 1; v <= n; ++v) {
    reach[v][v] = 1;
  }
  for (const Edge& e : g.edges()) {
    reach[e.sender][e.receiver] = 1;
  }
  for (int k = 1; k <= n; ++k) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        if (reach[i][k] && reach[k][j]) {
          reach[i][j] = 1;
        }
      }
    }
  }
  for (int a : g.active_followers()) {
    if (!reach[root][a]) {
      return false;
    }
  }
  return true;
}

DirectedGraph random_graph(std::mt19937_64& rng, int num_followers) {
  const int leader = num_followers + 1;
  std::vector<int> active;
  while (active.empty()) {
    active.clear();
    for (int i = 1; i <= num_followers; ++i) {
      if (rng() & 1ULL) {
        active.push_back(i);
      }
    }
  }
  std::vector<Edge> edges;
  for (int r : active) {
    for (int s = 1; s <= leader; ++s) {
      const bool s_ok = s == leader ||
                        std::find(active.begin(), active.end(), s) != active.end();
      if (s_ok && s != r && (rng() & 1ULL)) {
        edges.push_back({r, s});
      }
    }
  }
  return DirectedGraph(leader, active, edges);
}

const DirectedGraph kExample{3, {1, 2}, {{1, 2}, {2, 1}, {1, 3}}};

}  // namespace

TEST_CASE("adjacency matrix follows the receiver/sender convention") {
  Eigen::MatrixXd a = thmas::adjacency_matrix(kExample);
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 1, 1, 1, 0, 0, 0, 0, 0;
  CHECK(thmas_test::max_abs_diff(a, expected) == 0.0);
}

TEST_CASE("empty graph gives zero matrices") {
  DirectedGraph g(3, {1, 2}, {});
  CHECK(thmas::adjacency_matrix(g).isZero(0.0));
  CHECK(thmas::degree_matrix(g).isZero(0.0));
  CHECK(thmas::laplacian(g).isZero(0.0));
}

TEST_CASE("leader row of the adjacency matrix is zero") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    DirectedGraph g = random_graph(rng, 4);
    Eigen::MatrixXd a = thmas::adjacency_matrix(g);
    CHECK(a.row(a.rows() - 1).isZero(0.0));
  }
}

TEST_CASE("degree matrix counts incoming edges") {
  Eigen::MatrixXd d = thmas::degree_matrix(kExample);
  Eigen::MatrixXd expected = Eigen::Vector3d(2, 1, 0).asDiagonal();
  CHECK(thmas_test::max_abs_diff(d, expected) == 0.0);

  DirectedGraph single(3, {1}, {{1, 3}});
  Eigen::MatrixXd d1 = thmas::degree_matrix(single);
  CHECK(thmas_test::max_abs_diff(d1, Eigen::MatrixXd(Eigen::Vector3d(1, 0, 0).asDiagonal())) == 0.0);
}

TEST_CASE("laplacian equals degree minus adjacency with zero row sums") {
  Eigen::MatrixXd L = thmas::laplacian(kExample);
  Eigen::MatrixXd expected(3, 3);
  expected << 2, -1, -1, -1, 1, 0, 0, 0, 0;
  CHECK(thmas_test::max_abs_diff(L, expected) == 0.0);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    DirectedGraph g = random_graph(rng, 5);
    Eigen::MatrixXd lap = thmas::laplacian(g);
    CHECK(thmas_test::max_abs_diff(
              lap, thmas::degree_matrix(g) - thmas::adjacency_matrix(g)) == 0.0);
    CHECK(lap.rowwise().sum().isZero(0.0));
    CHECK(lap.row(lap.rows() - 1).isZero(0.0));
  }
}

TEST_CASE("spanning tree detection") {
  CHECK(thmas::has_spanning_tree(kExample, 3));

  DirectedGraph no_edges(3, {1, 2}, {});
  CHECK_FALSE(thmas::has_spanning_tree(no_edges, 3));

  DirectedGraph direct(4, {2}, {{2, 4}});
  CHECK(thmas::has_spanning_tree(direct, 4));

  CHECK_THROWS_AS(thmas::has_spanning_tree(direct, 1), std::invalid_argument);
}

TEST_CASE("spanning tree matches the transitive-closure oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    DirectedGraph g = random_graph(rng, 5);
    const int root = (rng() & 1ULL) ? g.leader()
                                    : g.active_followers()[rng() % g.active_followers().size()];
    CHECK(thmas::has_spanning_tree(g, root) == reachability_oracle(g, root));
  }
}

TEST_CASE("union of a single graph is the graph itself") {
  CHECK(thmas::union_graphs({kExample}) == kExample);
}

TEST_CASE("union of edge-disjoint graphs adds edge counts") {
  DirectedGraph a(3, {1, 2}, {{1, 2}});
  DirectedGraph b(3, {2}, {{2, 3}});
  DirectedGraph u = thmas::union_graphs({a, b});
  CHECK(u.edges().size() == 2);
  CHECK(u.active_followers() == std::vector<int>{1, 2});
}

TEST_CASE("union is associative, commutative and idempotent") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    DirectedGraph a = random_graph(rng, 4);
    DirectedGraph b = random_graph(rng, 4);
    DirectedGraph c = random_graph(rng, 4);
    CHECK(thmas::union_graphs({a, b}) == thmas::union_graphs({b, a}));
    CHECK(thmas::union_graphs({thmas::union_graphs({a, b}), c}) ==
          thmas::union_graphs({a, thmas::union_graphs({b, c})}));
    CHECK(thmas::union_graphs({a, a}) == thmas::union_graphs({a}));
  }
}

TEST_CASE("union of an empty list is rejected") {
  CHECK_THROWS_AS(thmas::union_graphs({}), std::invalid_argument);
}

TEST_CASE("ring subgraph construction") {
  SUBCASE("single active follower gets only the leader edge") {
    DirectedGraph g = thmas::build_ring_subgraph({2}, 4);
    CHECK(g.edges() == std::vector<Edge>{{2, 4}});
  }
  SUBCASE("two followers form a 2-cycle plus the leader edge") {
    DirectedGraph g = thmas::build_ring_subgraph({1, 2}, 4);
    CHECK(g.edges() == std::vector<Edge>{{1, 2}, {1, 4}, {2, 1}});
  }
  SUBCASE("empty active set is rejected") {
    CHECK_THROWS_AS(thmas::build_ring_subgraph({}, 4), std::invalid_argument);
  }
}

TEST_CASE("every ring subgraph spans from the leader with max in-degree 2") {
  for (int n = 1; n <= 8; ++n) {
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      std::vector<int> active;
      for (int i = 0; i < n; ++i) {
        if (mask & (1u << i)) {
          active.push_back(i + 1);
        }
      }
      DirectedGraph g = thmas::build_ring_subgraph(active, n + 1);
      CHECK(thmas::has_spanning_tree(g, n + 1));
      Eigen::MatrixXd lap = thmas::laplacian(g);
      CHECK(lap.row(n).isZero(0.0));
      CHECK(lap.rowwise().sum().isZero(0.0));
      const double dmax = thmas::degree_matrix(g).diagonal().maxCoeff();
      CHECK(dmax == (active.size() >= 2 ? 2.0 : 1.0));
    }
  }
}

TEST_CASE("invalid graphs are rejected") {
  CHECK_THROWS_AS(DirectedGraph(3, {1}, {{1, 1}}), std::invalid_argument);   // self-loop
  CHECK_THROWS_AS(DirectedGraph(3, {1}, {{3, 1}}), std::invalid_argument);   // into leader
  CHECK_THROWS_AS(DirectedGraph(3, {1}, {{1, 2}}), std::invalid_argument);   // inactive sender
  CHECK_THROWS_AS(DirectedGraph(3, {0}, {}), std::invalid_argument);         // bad index
  CHECK_THROWS_AS(DirectedGraph(1, {}, {}), std::invalid_argument);          // no follower
}
