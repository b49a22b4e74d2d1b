#include "csm/query_dag.hpp"

#include <algorithm>
#include <queue>

namespace csm {

namespace {

// BFS visiting neighbors in ascending id. Returns visit order and depths.
std::pair<std::vector<VertexId>, std::vector<std::uint32_t>> bfs(const QueryGraph& query,
                                                                  VertexId root) {
  constexpr auto kUnseen = ~std::uint32_t{0};
  std::vector<std::uint32_t> depth(query.size(), kUnseen);
  std::vector<VertexId> order;
  order.reserve(query.size());
  std::queue<VertexId> pending;
  depth[root] = 0;
  pending.push(root);
  while (!pending.empty()) {
    VertexId u = pending.front();
    pending.pop();
    order.push_back(u);
    for (const auto& n : query.neighbors(u)) {
      if (depth[n.vertex] != kUnseen) continue;
      depth[n.vertex] = depth[u] + 1;
      pending.push(n.vertex);
    }
  }
  return {std::move(order), std::move(depth)};
}

}  // namespace

std::uint32_t dag_height(const QueryGraph& query, VertexId root) {
  if (root >= query.size()) throw QueryError("unknown root vertex " + std::to_string(root));
  auto [order, depth] = bfs(query, root);
  std::uint32_t height = 0;
  for (VertexId u : order) height = std::max(height, depth[u]);
  return height;
}

QueryDag build_dag(const QueryGraph& query) {
  if (query.size() == 0) throw QueryError("query graph is empty");
  if (!query.connected()) throw QueryError("query graph is not connected");

  VertexId root = 0;
  std::uint32_t best = dag_height(query, 0);
  for (VertexId u = 1; u < query.size(); ++u) {
    auto h = dag_height(query, u);
    if (h > best) {
      best = h;
      root = u;
    }
  }

  QueryDag dag;
  dag.root = root;
  auto [order, depth] = bfs(query, root);
  dag.topo_order = std::move(order);
  dag.depth = std::move(depth);
  std::vector<std::uint32_t> visit_pos(query.size());
  for (std::uint32_t i = 0; i < dag.topo_order.size(); ++i) visit_pos[dag.topo_order[i]] = i;

  dag.parents.resize(query.size());
  dag.children.resize(query.size());
  for (const auto& e : query.edges()) {
    auto [from, to] = visit_pos[e.src] < visit_pos[e.dst] ? std::pair{e.src, e.dst}
                                                          : std::pair{e.dst, e.src};
    dag.children[from].push_back(to);
    dag.parents[to].push_back(from);
  }
  for (auto& list : dag.parents) std::sort(list.begin(), list.end());
  for (auto& list : dag.children) std::sort(list.begin(), list.end());
  return dag;
}

QueryPlan QueryPlan::make(QueryGraph query) {
  QueryPlan plan;
  plan.dag = build_dag(query);
  plan.query = std::move(query);
  const auto& q = plan.query;
  const auto& dag = plan.dag;
  auto index_of = [](const std::vector<VertexId>& list, VertexId v) {
    return static_cast<std::uint32_t>(std::lower_bound(list.begin(), list.end(), v) - list.begin());
  };
  plan.slots.resize(q.size());
  for (VertexId u = 0; u < q.size(); ++u) {
    for (const auto& n : q.neighbors(u)) {
      NeighborSlot slot;
      slot.vertex = n.vertex;
      slot.is_parent = std::binary_search(dag.parents[u].begin(), dag.parents[u].end(), n.vertex);
      slot.role_index = slot.is_parent ? index_of(dag.parents[u], n.vertex)
                                       : index_of(dag.children[u], n.vertex);
      slot.back_slot = static_cast<std::uint32_t>(*q.neighbor_slot(n.vertex, u));
      slot.back_role_index = slot.is_parent ? index_of(dag.children[n.vertex], u)
                                            : index_of(dag.parents[n.vertex], u);
      plan.slots[u].push_back(slot);
    }
  }
  return plan;
}

}  // namespace csm
