#include <doctest.h>

#include <algorithm>

#include "csm/query_dag.hpp"
#include "support.hpp"

using namespace csm;

namespace {

QueryGraph query(const char* text, GraphOptions options = {}) {
  Vocabulary vocab;
  return QueryGraph::from_graph(parse_graph_text(text, vocab, options));
}

void check_dag_shape(const QueryGraph& q, const QueryDag& dag) {
  std::vector<std::size_t> pos(q.size());
  for (std::size_t i = 0; i < dag.topo_order.size(); ++i) pos[dag.topo_order[i]] = i;
  CHECK(dag.topo_order.size() == q.size());
  std::size_t roots = 0;
  for (VertexId u = 0; u < q.size(); ++u) {
    if (dag.parents[u].empty()) ++roots;
    CHECK(dag.parents[u].size() + dag.children[u].size() == q.degree(u));
    for (const auto& n : q.neighbors(u)) {
      bool up = std::ranges::binary_search(dag.parents[u], n.vertex);
      bool down = std::ranges::binary_search(dag.children[u], n.vertex);
      CHECK(up != down);
    }
    for (auto p : dag.parents[u]) CHECK(pos[p] < pos[u]);
    CHECK(dag_height(q, u) <= dag_height(q, dag.root));
  }
  CHECK(roots == 1);
}

}  // namespace

TEST_CASE("running example DAG") {
  auto in = test::running_example();
  auto dag = build_dag(in.query);
  // Internal ids 0..4 are u1..u5.
  CHECK(dag.root == 0);
  CHECK(dag.children[0] == std::vector<VertexId>{1, 2});
  CHECK(dag.children[1] == std::vector<VertexId>{3});
  CHECK(dag.children[2] == std::vector<VertexId>{3, 4});
  CHECK(dag.children[3] == std::vector<VertexId>{4});
  CHECK(dag.children[4].empty());
  CHECK(dag.parents[3] == std::vector<VertexId>{1, 2});
  check_dag_shape(in.query, dag);
  // BFS from u1 reaches u5 through u3 at distance 2.
  CHECK(dag_height(in.query, 0) == 2);
}

TEST_CASE("single vertex query") {
  auto q = query("v 0 A\n");
  auto dag = build_dag(q);
  CHECK(dag.root == 0);
  CHECK(dag.children[0].empty());
}

TEST_CASE("path roots at an endpoint") {
  auto q = query("v 0 A\nv 1 B\nv 2 C\ne 0 1\ne 1 2\n");
  CHECK(dag_height(q, 0) == 2);
  CHECK(dag_height(q, 1) == 1);
  auto dag = build_dag(q);
  CHECK(dag.root == 0);
  CHECK(dag.children[0] == std::vector<VertexId>{1});
  CHECK(dag.children[1] == std::vector<VertexId>{2});
  CHECK_THROWS_AS(dag_height(q, 7), QueryError);
}

TEST_CASE("equal depth neighbors: earlier visit is the parent") {
  auto q = query("v 0 A\nv 1 A\nv 2 A\ne 0 1\ne 0 2\ne 1 2\n");
  auto dag = build_dag(q);
  CHECK(dag.root == 0);
  CHECK(dag.parents[2] == std::vector<VertexId>{0, 1});
  check_dag_shape(q, dag);
}

TEST_CASE("invalid queries") {
  CHECK_THROWS_AS(build_dag(QueryGraph{}), QueryError);
  CHECK_THROWS_AS(build_dag(query("v 0 A\nv 1 A\n")), QueryError);
}

TEST_CASE("random queries give valid DAGs and consistent slots") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto trial = test::random_trial(seed);
    const auto& q = trial.instance.query;
    auto plan = QueryPlan::make(q);
    check_dag_shape(plan.query, plan.dag);
    for (VertexId u = 0; u < q.size(); ++u) {
      for (std::size_t k = 0; k < plan.slots[u].size(); ++k) {
        const auto& s = plan.slots[u][k];
        const auto& back = plan.slots[s.vertex][s.back_slot];
        CHECK(back.vertex == u);
        CHECK(back.is_parent != s.is_parent);
        CHECK(back.role_index == s.back_role_index);
      }
    }
  }
}
