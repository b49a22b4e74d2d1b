#include "csm/matcher.hpp"

#include <algorithm>

namespace csm {

MatchStats& MatchStats::operator+=(const MatchStats& o) {
  seeds_tried += o.seeds_tried;
  seeds_passed += o.seeds_passed;
  extensions += o.extensions;
  selections += o.selections;
  backtrack_signals += o.backtrack_signals;
  estimate_checks += o.estimate_checks;
  estimate_violations += o.estimate_violations;
  return *this;
}

PartialEmbedding::PartialEmbedding(const Dcs& dcs, const DataGraph& graph)
    : dcs_(&dcs),
      graph_(&graph),
      mapping_(dcs.plan().size(), kNoVertex),
      used_(graph.vertex_slots(), 0),
      mapped_neighbors_(dcs.plan().size(), 0),
      estimate_(dcs.plan().size(), kNoEstimate) {}

void PartialEmbedding::map(VertexId u, VertexId v) {
  if (mapped(u)) throw InvariantError("query vertex mapped twice");
  mapping_[u] = v;
  ++used_[v];
  order_.push_back(u);
  frames_.push_back(undo_.size());
  const auto row = graph_->label_rank(v);
  const auto& neighbors = plan().query.neighbors(u);
  for (std::size_t k = 0; k < neighbors.size(); ++k) {
    VertexId w = neighbors[k].vertex;
    ++mapped_neighbors_[w];
    if (mapped(w)) continue;
    undo_.push_back({w, estimate_[w]});
    estimate_[w] = std::min(estimate_[w], dcs_->n2(u, row, k));
  }
}

void PartialEmbedding::unmap(VertexId u) {
  if (order_.empty() || order_.back() != u) throw InvariantError("unmap out of LIFO order");
  const auto frame = frames_.back();
  if (frame > undo_.size()) throw InvariantError("estimate undo stack underflow");
  while (undo_.size() > frame) {
    estimate_[undo_.back().vertex] = undo_.back().previous;
    undo_.pop_back();
  }
  frames_.pop_back();
  order_.pop_back();
  for (const auto& n : plan().query.neighbors(u)) --mapped_neighbors_[n.vertex];
  --used_[mapping_[u]];
  mapping_[u] = kNoVertex;
}

std::vector<VertexId> compute_extendable_candidates(const PartialEmbedding& m, VertexId u) {
  const auto& plan = m.plan();
  const auto& dcs = m.dcs();
  const auto& g = m.graph();
  const auto& neighbors = plan.query.neighbors(u);

  // u_min: mapped neighbor whose image has the fewest D2 neighbors in C(u).
  std::size_t best_slot = neighbors.size();
  std::uint32_t best = kNoEstimate;
  for (std::size_t k = 0; k < neighbors.size(); ++k) {
    VertexId w = neighbors[k].vertex;
    if (!m.mapped(w)) continue;
    auto count = dcs.n2(w, g.label_rank(m.image(w)), plan.slots[u][k].back_slot);
    if (best_slot == neighbors.size() || count < best) {
      best = count;
      best_slot = k;
    }
  }
  std::vector<VertexId> out;
  if (best_slot == neighbors.size()) return out;

  const VertexId umin = neighbors[best_slot].vertex;
  const VertexId anchor = m.image(umin);
  for_each_dcs_neighbor(plan, g, umin, anchor, plan.slots[u][best_slot].back_slot, [&](VertexId y) {
    if (!dcs.d2(u, g.label_rank(y))) return;
    for (std::size_t k = 0; k < neighbors.size(); ++k) {
      const auto& n = neighbors[k];
      if (k == best_slot || !m.mapped(n.vertex)) continue;
      VertexId w = m.image(n.vertex);
      bool ok = n.outgoing ? g.has_edge(y, w, n.edge_label) : g.has_edge(w, y, n.edge_label);
      if (!ok) return;
    }
    out.push_back(y);
  });
  return out;
}

namespace {

bool postponed(const PartialEmbedding& m, VertexId u, Postponement rule) {
  if (rule == Postponement::IsolatedVertex) return m.isolated(u);
  return m.extendable(u) && m.plan().query.degree(u) == 1;
}

bool has_free_candidate(const PartialEmbedding& m, const std::vector<VertexId>& candidates,
                        MatchSemantics semantics) {
  if (semantics == MatchSemantics::Homomorphism) return !candidates.empty();
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](VertexId v) { return !m.used(v); });
}

}  // namespace

Selection select_next_vertex(const PartialEmbedding& m, const MatcherOptions& options,
                             MatchStats* stats) {
  const auto n = static_cast<VertexId>(m.plan().size());
  if (stats) ++stats->selections;
  if (stats && options.check_estimates) {
    for (VertexId u = 0; u < n; ++u) {
      if (!m.extendable(u)) continue;
      ++stats->estimate_checks;
      if (compute_extendable_candidates(m, u).size() > m.estimate(u)) ++stats->estimate_violations;
    }
  }

  // Postponed vertices have every relevant neighbor mapped, so C_M is final.
  for (VertexId u = 0; u < n; ++u) {
    if (!postponed(m, u, options.postponement)) continue;
    if (!has_free_candidate(m, compute_extendable_candidates(m, u), options.semantics)) {
      if (stats) ++stats->backtrack_signals;
      return {kNoVertex, true};
    }
  }

  auto size_of = [&](VertexId u) -> std::uint64_t {
    if (options.order == OrderStrategy::Exact) return compute_extendable_candidates(m, u).size();
    return m.estimate(u);
  };
  for (bool want_postponed : {false, true}) {
    VertexId pick = kNoVertex;
    std::uint64_t best = 0;
    for (VertexId u = 0; u < n; ++u) {
      if (!m.extendable(u) || postponed(m, u, options.postponement) != want_postponed) continue;
      auto s = size_of(u);
      if (pick == kNoVertex || s < best) {
        pick = u;
        best = s;
      }
    }
    if (pick != kNoVertex) return {pick, false};
  }
  throw InvariantError("no extendable query vertex (query not connected?)");
}

namespace {

class Backtracker {
 public:
  Backtracker(const Dcs& dcs, const DataGraph& graph, std::span<const DcsEdge> seeds,
              const MatcherOptions& options, MatchStats& stats, const MatchSink& sink)
      : m_(dcs, graph), seeds_(seeds), options_(options), stats_(stats), sink_(sink) {}

  std::uint64_t run() {
    const auto& g = m_.graph();
    const auto& dcs = m_.dcs();
    for (seed_ = 0; seed_ < seeds_.size(); ++seed_) {
      const auto& e = seeds_[seed_];
      ++stats_.seeds_tried;
      if (!dcs.d2(e.parent.query, g.label_rank(e.parent.data)) ||
          !dcs.d2(e.child.query, g.label_rank(e.child.data))) {
        continue;
      }
      if (iso() && e.parent.data == e.child.data) continue;
      ++stats_.seeds_passed;
      m_.map(e.parent.query, e.parent.data);
      m_.map(e.child.query, e.child.data);
      if (!covers_earlier_seed()) extend();
      m_.unmap(e.child.query);
      m_.unmap(e.parent.query);
    }
    return found_;
  }

 private:
  bool iso() const { return options_.semantics == MatchSemantics::Isomorphism; }

  // A match is reported only from the lowest-index seed it contains.
  bool covers_earlier_seed() const {
    for (std::size_t j = 0; j < seed_; ++j) {
      const auto& e = seeds_[j];
      if (m_.image(e.parent.query) == e.parent.data && m_.image(e.child.query) == e.child.data) {
        return true;
      }
    }
    return false;
  }

  void extend() {
    if (m_.size() == m_.plan().size()) {
      ++found_;
      if (sink_) sink_(m_.mapping());
      return;
    }
    auto next = select_next_vertex(m_, options_, &stats_);
    if (next.backtrack) return;
    const VertexId u = next.vertex;
    for (VertexId v : compute_extendable_candidates(m_, u)) {
      if (iso() && m_.used(v)) continue;
      ++stats_.extensions;
      m_.map(u, v);
      if (!covers_earlier_seed()) extend();
      m_.unmap(u);
    }
  }

  PartialEmbedding m_;
  std::span<const DcsEdge> seeds_;
  const MatcherOptions& options_;
  MatchStats& stats_;
  const MatchSink& sink_;
  std::size_t seed_ = 0;
  std::uint64_t found_ = 0;
};

}  // namespace

std::uint64_t find_matches(const Dcs& dcs, const DataGraph& graph, std::span<const DcsEdge> seeds,
                           const MatcherOptions& options, MatchStats& stats,
                           const MatchSink& sink) {
  if (dcs.plan().size() < 2) throw QueryError("query needs at least one edge");
  return Backtracker(dcs, graph, seeds, options, stats, sink).run();
}

}  // namespace csm
