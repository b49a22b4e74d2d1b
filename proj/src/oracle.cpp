#include "csm/oracle.hpp"

#include <algorithm>
#include <iterator>
#include <queue>

namespace csm {

namespace {

void check_limits(const QueryGraph& q, const DataGraph& g, const OracleLimits& limits) {
  if (q.size() > limits.max_query_vertices) {
    throw LimitError("oracle: query has " + std::to_string(q.size()) + " vertices, limit " +
                     std::to_string(limits.max_query_vertices));
  }
  if (g.vertex_count() > limits.max_data_vertices) {
    throw LimitError("oracle: data graph has " + std::to_string(g.vertex_count()) +
                     " vertices, limit " + std::to_string(limits.max_data_vertices));
  }
}

// Query vertices in BFS order so each one after the first (per component)
// has an already-placed neighbor to check against.
std::vector<VertexId> placement_order(const QueryGraph& q) {
  std::vector<VertexId> order;
  std::vector<bool> seen(q.size(), false);
  for (VertexId start = 0; start < q.size(); ++start) {
    if (seen[start]) continue;
    std::queue<VertexId> pending;
    pending.push(start);
    seen[start] = true;
    while (!pending.empty()) {
      auto u = pending.front();
      pending.pop();
      order.push_back(u);
      for (const auto& n : q.neighbors(u)) {
        if (!seen[n.vertex]) {
          seen[n.vertex] = true;
          pending.push(n.vertex);
        }
      }
    }
  }
  return order;
}

struct Search {
  const QueryGraph& q;
  const DataGraph& g;
  MatchSemantics mode;
  std::vector<VertexId> order;
  Embedding mapping;
  EmbeddingSet out;

  bool edges_hold(VertexId u, VertexId v) const {
    for (const auto& n : q.neighbors(u)) {
      VertexId w = mapping[n.vertex];
      if (w == kNoVertex) continue;
      auto src = n.outgoing ? v : w;
      auto dst = n.outgoing ? w : v;
      if (!g.has_edge(src, dst, n.edge_label)) return false;
    }
    return true;
  }

  void extend(std::size_t depth) {
    if (depth == order.size()) {
      out.insert(mapping);
      return;
    }
    VertexId u = order[depth];
    for (VertexId v : g.vertices_with_label(q.label(u))) {
      if (mode == MatchSemantics::Isomorphism &&
          std::find(mapping.begin(), mapping.end(), v) != mapping.end()) {
        continue;
      }
      if (!edges_hold(u, v)) continue;
      mapping[u] = v;
      extend(depth + 1);
      mapping[u] = kNoVertex;
    }
  }
};

}  // namespace

EmbeddingSet enumerate_embeddings(const QueryGraph& q, const DataGraph& g, MatchSemantics mode,
                                  const OracleLimits& limits) {
  check_limits(q, g, limits);
  if (q.size() == 0) return {};
  Search search{q, g, mode, placement_order(q), Embedding(q.size(), kNoVertex), {}};
  search.extend(0);
  return std::move(search.out);
}

bool embedding_uses_edge(const QueryGraph& q, const DataGraph& g, const Embedding& m,
                         VertexId src, VertexId dst, LabelId label) {
  for (const auto& e : q.edges()) {
    if (e.label != label) continue;
    if (m[e.src] == src && m[e.dst] == dst) return true;
    if (!g.directed() && m[e.src] == dst && m[e.dst] == src) return true;
  }
  return false;
}

OracleDelta delta_matches(const QueryGraph& q, const DataGraph& before, const EdgeChange& change,
                          MatchSemantics mode, const OracleLimits& limits,
                          const EmbeddingSet* before_set) {
  check_limits(q, before, limits);
  EmbeddingSet computed;
  if (before_set == nullptr) {
    computed = enumerate_embeddings(q, before, mode, limits);
    before_set = &computed;
  }
  DataGraph after = before;
  if (change.insert) {
    after.add_edge(change.src, change.dst, change.label);
  } else {
    after.remove_edge(change.src, change.dst);
  }

  OracleDelta delta;
  delta.after = enumerate_embeddings(q, after, mode, limits);
  std::set_difference(delta.after.begin(), delta.after.end(), before_set->begin(),
                      before_set->end(), std::inserter(delta.positive, delta.positive.end()));
  std::set_difference(before_set->begin(), before_set->end(), delta.after.begin(),
                      delta.after.end(), std::inserter(delta.negative, delta.negative.end()));

  const auto& expected = change.insert ? delta.positive : delta.negative;
  const auto& unexpected = change.insert ? delta.negative : delta.positive;
  if (!unexpected.empty()) throw InvariantError("oracle: delta is not monotone");
  const auto& side = change.insert ? delta.after : *before_set;
  std::size_t containing = 0;
  for (const auto& m : side) {
    if (embedding_uses_edge(q, before, m, change.src, change.dst, change.label)) {
      ++containing;
      if (!expected.contains(m)) throw InvariantError("oracle: edge-containing match missing");
    }
  }
  if (containing != expected.size()) throw InvariantError("oracle: delta has a stray match");
  return delta;
}

}  // namespace csm
