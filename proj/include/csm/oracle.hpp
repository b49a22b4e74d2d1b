#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "csm/graph.hpp"

namespace csm {

enum class MatchSemantics : std::uint8_t { Isomorphism, Homomorphism };

/// Size guards for the brute-force reference.
struct OracleLimits {
  std::size_t max_query_vertices = 8;
  std::size_t max_data_vertices = 64;
};

/// Mapping as data vertex ids in query-vertex order.
using Embedding = std::vector<VertexId>;
using EmbeddingSet = std::set<Embedding>;

/// Every embedding (or homomorphism) of q in g, by plain backtracking.
EmbeddingSet enumerate_embeddings(const QueryGraph& q, const DataGraph& g, MatchSemantics mode,
                                  const OracleLimits& limits = {});

/// True when some query edge maps onto data edge src->dst carrying `label`.
bool embedding_uses_edge(const QueryGraph& q, const DataGraph& g, const Embedding& m,
                         VertexId src, VertexId dst, LabelId label);

struct EdgeChange {
  VertexId src = kNoVertex;
  VertexId dst = kNoVertex;
  LabelId label = kUnlabeledEdge;
  bool insert = true;
};

struct OracleDelta {
  EmbeddingSet positive;
  EmbeddingSet negative;
  /// Embeddings of the graph after the change.
  EmbeddingSet after;
};

/// Positive/negative matches of one edge change applied to `before`.
/// `before_set` may carry enumerate_embeddings(q, before) to skip recomputing
/// it. Throws InvariantError when the complementary delta is non-empty or the
/// delta differs from the embeddings containing the changed edge.
OracleDelta delta_matches(const QueryGraph& q, const DataGraph& before, const EdgeChange& change,
                          MatchSemantics mode, const OracleLimits& limits = {},
                          const EmbeddingSet* before_set = nullptr);

}  // namespace csm
