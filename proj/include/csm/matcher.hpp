#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "csm/dcs.hpp"
#include "csm/oracle.hpp"

namespace csm {

enum class OrderStrategy : std::uint8_t { Estimated, Exact };
/// Which extendable vertices get postponed to the end of the order.
enum class Postponement : std::uint8_t { IsolatedVertex, LeafOnly };

struct MatcherOptions {
  MatchSemantics semantics = MatchSemantics::Isomorphism;
  OrderStrategy order = OrderStrategy::Estimated;
  Postponement postponement = Postponement::IsolatedVertex;
  /// Recompute |C_M(u)| for every extendable u at each selection and count
  /// the cases where it exceeds E(u). Expensive; for tests.
  bool check_estimates = false;
};

struct MatchStats {
  std::uint64_t seeds_tried = 0;
  std::uint64_t seeds_passed = 0;  // passed the D2 gate
  std::uint64_t extensions = 0;    // vertices mapped beyond the seed pair
  std::uint64_t selections = 0;
  std::uint64_t backtrack_signals = 0;  // rule-1 prunes
  std::uint64_t estimate_checks = 0;
  std::uint64_t estimate_violations = 0;

  MatchStats& operator+=(const MatchStats& o);
};

inline constexpr std::uint32_t kNoEstimate = std::numeric_limits<std::uint32_t>::max();

/// M plus the per-vertex estimates E(u) and their undo stack.
/// map/unmap must be called in LIFO order.
class PartialEmbedding {
 public:
  PartialEmbedding(const Dcs& dcs, const DataGraph& graph);

  const Dcs& dcs() const noexcept { return *dcs_; }
  const DataGraph& graph() const noexcept { return *graph_; }
  const QueryPlan& plan() const noexcept { return dcs_->plan(); }

  /// Maps u to v, then lowers E of u's unmapped neighbors.
  void map(VertexId u, VertexId v);
  /// Restores the estimates pushed by the matching map, then unmaps u.
  void unmap(VertexId u);

  bool mapped(VertexId u) const { return mapping_[u] != kNoVertex; }
  VertexId image(VertexId u) const { return mapping_[u]; }
  std::span<const VertexId> mapping() const noexcept { return mapping_; }
  std::size_t size() const noexcept { return order_.size(); }
  bool used(VertexId v) const { return v < used_.size() && used_[v] != 0; }

  std::uint32_t estimate(VertexId u) const { return estimate_[u]; }
  std::uint32_t mapped_neighbors(VertexId u) const { return mapped_neighbors_[u]; }
  std::size_t undo_depth() const noexcept { return undo_.size(); }

  bool extendable(VertexId u) const { return !mapped(u) && mapped_neighbors_[u] != 0; }
  /// Extendable with every neighbor mapped.
  bool isolated(VertexId u) const {
    return extendable(u) && mapped_neighbors_[u] == plan().query.degree(u);
  }

 private:
  struct Undo {
    VertexId vertex;
    std::uint32_t previous;
  };

  const Dcs* dcs_;
  const DataGraph* graph_;
  std::vector<VertexId> mapping_;
  std::vector<std::uint32_t> used_;
  std::vector<std::uint32_t> mapped_neighbors_;
  std::vector<std::uint32_t> estimate_;
  std::vector<Undo> undo_;
  std::vector<std::size_t> frames_;  // undo_ size before each map
  std::vector<VertexId> order_;
};

/// C_M(u): D2 candidates of u adjacent to the images of all mapped neighbors.
/// Used data vertices are not excluded.
std::vector<VertexId> compute_extendable_candidates(const PartialEmbedding& m, VertexId u);

struct Selection {
  VertexId vertex = kNoVertex;
  bool backtrack = false;
};

Selection select_next_vertex(const PartialEmbedding& m, const MatcherOptions& options,
                             MatchStats* stats = nullptr);

using MatchSink = std::function<void(std::span<const VertexId>)>;

/// Enumerates every match containing at least one of `seeds`, each once.
/// Passing an empty sink counts without materializing.
std::uint64_t find_matches(const Dcs& dcs, const DataGraph& graph, std::span<const DcsEdge> seeds,
                           const MatcherOptions& options, MatchStats& stats,
                           const MatchSink& sink = {});

}  // namespace csm
