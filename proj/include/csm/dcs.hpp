#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "csm/graph.hpp"
#include "csm/query_dag.hpp"

namespace csm {

/// A DCS vertex <u,v>: data vertex v in the candidate set C(u).
struct CandidatePair {
  VertexId query = kNoVertex;
  VertexId data = kNoVertex;

  auto operator<=>(const CandidatePair&) const = default;
};

/// A DCS edge, stored with the DAG parent first.
struct DcsEdge {
  CandidatePair parent;
  CandidatePair child;

  auto operator<=>(const DcsEdge&) const = default;
};

/// Per-operation work counters.
struct UpdateStats {
  std::uint64_t updated_vertices = 0;  // <u,v> whose D1 or D2 flipped
  std::uint64_t visited_edges = 0;     // |E_DCS| seeds + DCS edges scanned by the queues
  std::uint64_t changed_edges = 0;     // |E_DCS|

  bool operator==(const UpdateStats&) const = default;
};

struct DcsFootprint {
  /// N1, N2 over DAG children, N1_P, N2_C.
  std::size_t update_entries = 0;
  /// N2 over DAG parents, kept only for the matcher's size estimates.
  std::size_t support_entries = 0;
};

/// Dynamic Candidate Space.
///
/// Every array is indexed by (query vertex u, row) where row is the rank of
/// the data vertex inside its label class (DataGraph::label_rank). DCS edges
/// are never stored; they are recovered from the data graph's label-indexed
/// adjacency.
class Dcs {
 public:
  Dcs() = default;

  /// From-scratch construction by the two recurrences.
  static Dcs build(const QueryPlan& plan, const DataGraph& graph);

  const QueryPlan& plan() const { return *plan_; }

  std::size_t rows(VertexId u) const { return nodes_.at(u).d1.size(); }

  bool d1(VertexId u, std::uint32_t row) const { return nodes_[u].d1[row] != 0; }
  bool d2(VertexId u, std::uint32_t row) const { return nodes_[u].d2[row] != 0; }
  /// N1 for the `index`-th DAG parent of u.
  std::uint32_t n1(VertexId u, std::uint32_t row, std::size_t index) const {
    return nodes_[u].n1[row * plan_->parent_count(u) + index];
  }
  std::uint32_t n1_parents(VertexId u, std::uint32_t row) const {
    return nodes_[u].n1_parents[row];
  }
  /// N2 for the neighbor stored at `slot` of QueryGraph::neighbors(u).
  std::uint32_t n2(VertexId u, std::uint32_t row, std::size_t slot) const;
  std::uint32_t n2_children(VertexId u, std::uint32_t row) const {
    return nodes_[u].n2_children[row];
  }

  // Lookups by data vertex id. `v` must be a candidate of `u`.
  bool d1_of(const DataGraph& g, VertexId u, VertexId v) const { return d1(u, g.label_rank(v)); }
  bool d2_of(const DataGraph& g, VertexId u, VertexId v) const { return d2(u, g.label_rank(v)); }
  /// N2_{u,v}[w] where w is a query neighbor of u.
  std::uint32_t n2_of(const DataGraph& g, VertexId u, VertexId v, VertexId w) const;
  std::uint32_t n1_of(const DataGraph& g, VertexId u, VertexId v, VertexId parent) const;

  bool is_candidate(const DataGraph& g, VertexId u, VertexId v) const {
    return g.contains(v) && g.label(v) == plan_->query.label(u);
  }

  /// Edge insertion (data edge already in `graph`). `touched`, when given,
  /// receives every pair whose D1 or D2 flipped.
  void insert_edges(const DataGraph& graph, std::span<const DcsEdge> edges, UpdateStats& stats,
                    std::vector<CandidatePair>* touched = nullptr);
  /// Edge deletion (data edge already removed from `graph`).
  void delete_edges(const DataGraph& graph, std::span<const DcsEdge> edges, UpdateStats& stats,
                    std::vector<CandidatePair>* touched = nullptr);

  /// Number of DCS edges at <u,v>.
  std::size_t degree(const DataGraph& graph, VertexId u, VertexId v) const;

  /// Call after `v` was added to the graph.
  void add_vertex(const DataGraph& graph, VertexId v);
  /// Call before an edge-free `v` is removed from the graph.
  void remove_vertex(const DataGraph& graph, VertexId v);

  DcsFootprint footprint() const;

  /// Recounts every counter from the flags and the graph, and checks the
  /// flag equations. Returns human-readable violations (empty when sound).
  std::vector<std::string> check_consistency(const DataGraph& graph) const;

  /// Compares flags and counters only.
  bool operator==(const Dcs& other) const { return nodes_ == other.nodes_; }

 private:
  struct Node {
    std::vector<std::uint8_t> d1;
    std::vector<std::uint8_t> d2;
    std::vector<std::uint32_t> n1;           // row * |Parent(u)| + parent index
    std::vector<std::uint32_t> n1_parents;   // N1_P
    std::vector<std::uint32_t> n2_child;     // row * |Child(u)| + child index
    std::vector<std::uint32_t> n2_children;  // N2_C
    std::vector<std::uint32_t> n2_parent;    // row * |Parent(u)| + parent index

    bool operator==(const Node&) const = default;
  };

  friend class DcsPropagation;

  const QueryPlan* plan_ = nullptr;
  std::vector<Node> nodes_;
};

/// E_DCS for the data edge src->dst carrying `label`: every DCS edge whose
/// query edge matches the endpoint labels, edge label and direction.
std::vector<DcsEdge> dcs_changed_edges(const DataGraph& graph, const QueryPlan& plan, VertexId src,
                                       VertexId dst, LabelId label);

inline Dcs build_dcs(const QueryPlan& plan, const DataGraph& graph) { return Dcs::build(plan, graph); }

inline void insertion_update(Dcs& dcs, const DataGraph& graph, std::span<const DcsEdge> edges,
                             UpdateStats& stats) {
  dcs.insert_edges(graph, edges, stats);
}

inline void deletion_update(Dcs& dcs, const DataGraph& graph, std::span<const DcsEdge> edges,
                            UpdateStats& stats) {
  dcs.delete_edges(graph, edges, stats);
}

/// Calls f(y) for every data neighbor y of x that forms a DCS edge between
/// <u,x> and <w,y>, where w is the query neighbor at `slot` of u.
template <class F>
void for_each_dcs_neighbor(const QueryPlan& plan, const DataGraph& graph, VertexId u, VertexId x,
                           std::size_t slot, F&& f) {
  const auto& qn = plan.query.neighbors(u)[slot];
  auto dir = qn.outgoing ? Direction::Out : Direction::In;
  for (const auto& n : graph.neighbors_with_label(x, plan.query.label(qn.vertex), dir)) {
    if (n.edge_label == qn.edge_label) f(n.vertex);
  }
}

}  // namespace csm
