#pragma once

#include <cstdint>
#include <vector>

#include "csm/graph.hpp"

namespace csm {

/// Rooted DAG obtained by directing every query edge from the earlier to the
/// later BFS-visited endpoint.
struct QueryDag {
  VertexId root = kNoVertex;
  std::vector<std::vector<VertexId>> parents;   // ascending ids
  std::vector<std::vector<VertexId>> children;  // ascending ids
  std::vector<VertexId> topo_order;             // BFS visit order
  std::vector<std::uint32_t> depth;

  bool operator==(const QueryDag&) const = default;
};

/// Root is the vertex whose BFS height is largest; ties go to the smaller id.
QueryDag build_dag(const QueryGraph& query);

/// Largest BFS distance from `root` (only vertices reachable from it count).
std::uint32_t dag_height(const QueryGraph& query, VertexId root);

/// Role of one entry of QueryGraph::neighbors(u) with respect to the DAG.
struct NeighborSlot {
  VertexId vertex = kNoVertex;
  bool is_parent = false;
  std::uint32_t role_index = 0;  // index in parents(u) or children(u)
  std::uint32_t back_slot = 0;   // index of u in neighbors(vertex)
  std::uint32_t back_role_index = 0;  // index of u in children(vertex) or parents(vertex)
};

/// Query graph plus its DAG and the slot tables the DCS and matcher index by.
struct QueryPlan {
  QueryGraph query;
  QueryDag dag;
  std::vector<std::vector<NeighborSlot>> slots;  // parallel to query.neighbors(u)

  static QueryPlan make(QueryGraph query);

  std::size_t size() const noexcept { return query.size(); }
  std::size_t parent_count(VertexId u) const { return dag.parents[u].size(); }
  std::size_t child_count(VertexId u) const { return dag.children[u].size(); }
};

}  // namespace csm
