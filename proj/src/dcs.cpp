#include "csm/dcs.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_set>

namespace csm {

namespace {

std::uint32_t count_dcs_neighbors(const QueryPlan& plan, const DataGraph& graph, VertexId u,
                                  VertexId x, std::size_t slot,
                                  const std::vector<std::uint8_t>& flags) {
  std::uint32_t count = 0;
  for_each_dcs_neighbor(plan, graph, u, x, slot,
                        [&](VertexId y) { count += flags[graph.label_rank(y)]; });
  return count;
}

}  // namespace

Dcs Dcs::build(const QueryPlan& plan, const DataGraph& graph) {
  Dcs dcs;
  dcs.plan_ = &plan;
  const auto& q = plan.query;
  dcs.nodes_.resize(q.size());
  for (VertexId u = 0; u < q.size(); ++u) {
    auto rows = graph.vertices_with_label(q.label(u)).size();
    auto& node = dcs.nodes_[u];
    node.d1.assign(rows, 0);
    node.d2.assign(rows, 0);
    node.n1.assign(rows * plan.parent_count(u), 0);
    node.n1_parents.assign(rows, 0);
    node.n2_child.assign(rows * plan.child_count(u), 0);
    node.n2_children.assign(rows, 0);
    node.n2_parent.assign(rows * plan.parent_count(u), 0);
  }

  // D1 top-down: some D1 candidate of every parent is adjacent.
  for (VertexId u : plan.dag.topo_order) {
    auto& node = dcs.nodes_[u];
    auto members = graph.vertices_with_label(q.label(u));
    const auto parents = plan.parent_count(u);
    for (std::uint32_t row = 0; row < members.size(); ++row) {
      for (std::size_t k = 0; k < plan.slots[u].size(); ++k) {
        const auto& slot = plan.slots[u][k];
        if (!slot.is_parent) continue;
        auto c = count_dcs_neighbors(plan, graph, u, members[row], k, dcs.nodes_[slot.vertex].d1);
        node.n1[row * parents + slot.role_index] = c;
        if (c != 0) ++node.n1_parents[row];
      }
      node.d1[row] = node.n1_parents[row] == parents;
    }
  }

  // D2 bottom-up: D1 holds and some D2 candidate of every child is adjacent.
  for (auto it = plan.dag.topo_order.rbegin(); it != plan.dag.topo_order.rend(); ++it) {
    VertexId u = *it;
    auto& node = dcs.nodes_[u];
    auto members = graph.vertices_with_label(q.label(u));
    const auto children = plan.child_count(u);
    for (std::uint32_t row = 0; row < members.size(); ++row) {
      for (std::size_t k = 0; k < plan.slots[u].size(); ++k) {
        const auto& slot = plan.slots[u][k];
        if (slot.is_parent) continue;
        auto c = count_dcs_neighbors(plan, graph, u, members[row], k, dcs.nodes_[slot.vertex].d2);
        node.n2_child[row * children + slot.role_index] = c;
        if (c != 0) ++node.n2_children[row];
      }
      node.d2[row] = node.d1[row] && node.n2_children[row] == children;
    }
  }

  // N2 toward parents needs every D2 value.
  for (VertexId u = 0; u < q.size(); ++u) {
    auto& node = dcs.nodes_[u];
    auto members = graph.vertices_with_label(q.label(u));
    const auto parents = plan.parent_count(u);
    for (std::uint32_t row = 0; row < members.size(); ++row) {
      for (std::size_t k = 0; k < plan.slots[u].size(); ++k) {
        const auto& slot = plan.slots[u][k];
        if (!slot.is_parent) continue;
        node.n2_parent[row * parents + slot.role_index] =
            count_dcs_neighbors(plan, graph, u, members[row], k, dcs.nodes_[slot.vertex].d2);
      }
    }
  }
  return dcs;
}

std::uint32_t Dcs::n2(VertexId u, std::uint32_t row, std::size_t slot) const {
  const auto& s = plan_->slots[u][slot];
  const auto& node = nodes_[u];
  if (s.is_parent) return node.n2_parent[row * plan_->parent_count(u) + s.role_index];
  return node.n2_child[row * plan_->child_count(u) + s.role_index];
}

std::uint32_t Dcs::n2_of(const DataGraph& g, VertexId u, VertexId v, VertexId w) const {
  auto slot = plan_->query.neighbor_slot(u, w);
  if (!slot) throw QueryError("not a query neighbor");
  return n2(u, g.label_rank(v), *slot);
}

std::uint32_t Dcs::n1_of(const DataGraph& g, VertexId u, VertexId v, VertexId parent) const {
  const auto& parents = plan_->dag.parents[u];
  auto it = std::lower_bound(parents.begin(), parents.end(), parent);
  if (it == parents.end() || *it != parent) throw QueryError("not a DAG parent");
  return n1(u, g.label_rank(v), static_cast<std::size_t>(it - parents.begin()));
}

// ---------------------------------------------------------------------------
// Incremental maintenance.
//
// Flags become visible only when a node leaves its queue, so every counter
// counts exactly the neighbors whose flag change has already been pushed
// along all of their present DCS edges. Seeds are processed against the
// visible flags first, then Q1 (D1 changes) drains, then Q2 (D2 changes).

class DcsPropagation {
 public:
  DcsPropagation(Dcs& dcs, const DataGraph& graph, UpdateStats& stats,
                 std::vector<CandidatePair>* touched)
      : dcs_(dcs), plan_(*dcs.plan_), graph_(graph), stats_(stats), touched_out_(touched) {}

  void insert(std::span<const DcsEdge> edges) {
    seed_count(edges);
    for (const auto& e : edges) {
      auto [pu, pr, cu, cr, parent_index, child_index] = resolve(e);
      if (node(pu).d1[pr]) top_down_plus(cu, e.child.data, cr, parent_index);
      if (node(pu).d2[pr]) ++n2_parent(cu, cr, parent_index);
      if (node(cu).d2[cr]) bottom_up_plus(pu, e.parent.data, pr, child_index);
    }
    while (!q1_.empty()) {
      auto [u, x] = q1_.front();
      q1_.pop_front();
      auto row = graph_.label_rank(x);
      touch(u, x);
      node(u).d1[row] = 1;
      for (std::size_t k = 0; k < plan_.slots[u].size(); ++k) {
        const auto& slot = plan_.slots[u][k];
        if (slot.is_parent) continue;
        for_each_dcs_neighbor(plan_, graph_, u, x, k, [&](VertexId y) {
          ++stats_.visited_edges;
          top_down_plus(slot.vertex, y, graph_.label_rank(y), slot.back_role_index);
        });
      }
      if (node(u).n2_children[row] == plan_.child_count(u)) q2_.emplace_back(u, x);
    }
    while (!q2_.empty()) {
      auto [u, x] = q2_.front();
      q2_.pop_front();
      touch(u, x);
      node(u).d2[graph_.label_rank(x)] = 1;
      for (std::size_t k = 0; k < plan_.slots[u].size(); ++k) {
        const auto& slot = plan_.slots[u][k];
        for_each_dcs_neighbor(plan_, graph_, u, x, k, [&](VertexId y) {
          ++stats_.visited_edges;
          auto row = graph_.label_rank(y);
          if (slot.is_parent) {
            bottom_up_plus(slot.vertex, y, row, slot.back_role_index);
          } else {
            ++n2_parent(slot.vertex, row, slot.back_role_index);
          }
        });
      }
    }
    finish();
  }

  void remove(std::span<const DcsEdge> edges) {
    seed_count(edges);
    for (const auto& e : edges) {
      auto [pu, pr, cu, cr, parent_index, child_index] = resolve(e);
      if (node(pu).d1[pr]) top_down_minus(cu, e.child.data, cr, parent_index);
      if (node(pu).d2[pr]) decrement(n2_parent(cu, cr, parent_index));
      if (node(cu).d2[cr]) bottom_up_minus(pu, e.parent.data, pr, child_index);
    }
    while (!q1_.empty()) {
      auto [u, x] = q1_.front();
      q1_.pop_front();
      auto row = graph_.label_rank(x);
      touch(u, x);
      if (node(u).d2[row]) clear_d2(u, x, row);
      for (std::size_t k = 0; k < plan_.slots[u].size(); ++k) {
        const auto& slot = plan_.slots[u][k];
        if (slot.is_parent) continue;
        for_each_dcs_neighbor(plan_, graph_, u, x, k, [&](VertexId y) {
          ++stats_.visited_edges;
          top_down_minus(slot.vertex, y, graph_.label_rank(y), slot.back_role_index);
        });
      }
      node(u).d1[row] = 0;
    }
    while (!q2_.empty()) {
      auto [u, x] = q2_.front();
      q2_.pop_front();
      auto row = graph_.label_rank(x);
      if (!node(u).d2[row]) continue;  // already cleared through Q1
      touch(u, x);
      clear_d2(u, x, row);
    }
    finish();
  }

 private:
  struct Resolved {
    VertexId parent_query;
    std::uint32_t parent_row;
    VertexId child_query;
    std::uint32_t child_row;
    std::uint32_t parent_index;  // of parent in parents(child)
    std::uint32_t child_index;   // of child in children(parent)
  };

  Resolved resolve(const DcsEdge& e) const {
    auto slot = plan_.query.neighbor_slot(e.child.query, e.parent.query);
    if (!slot) throw InvariantError("DCS edge without a query edge");
    const auto& s = plan_.slots[e.child.query][*slot];
    if (!s.is_parent) throw InvariantError("DCS edge stored child-first");
    return {e.parent.query, graph_.label_rank(e.parent.data), e.child.query,
            graph_.label_rank(e.child.data), s.role_index, s.back_role_index};
  }

  Dcs::Node& node(VertexId u) { return dcs_.nodes_[u]; }

  std::uint32_t& n1(VertexId u, std::uint32_t row, std::uint32_t index) {
    return node(u).n1[row * plan_.parent_count(u) + index];
  }
  std::uint32_t& n2_child(VertexId u, std::uint32_t row, std::uint32_t index) {
    return node(u).n2_child[row * plan_.child_count(u) + index];
  }
  std::uint32_t& n2_parent(VertexId u, std::uint32_t row, std::uint32_t index) {
    return node(u).n2_parent[row * plan_.parent_count(u) + index];
  }

  static void decrement(std::uint32_t& counter) {
    if (counter == 0) throw InvariantError("DCS counter underflow");
    --counter;
  }

  void seed_count(std::span<const DcsEdge> edges) {
    stats_.changed_edges += edges.size();
    stats_.visited_edges += edges.size();
  }

  void finish() {
    stats_.updated_vertices += touched_.size();
    if (touched_out_ == nullptr) return;
    for (auto key : touched_) {
      touched_out_->push_back({static_cast<VertexId>(key >> 32), static_cast<VertexId>(key)});
    }
    std::sort(touched_out_->begin(), touched_out_->end());
  }

  void touch(VertexId u, VertexId x) { touched_.insert((std::uint64_t{u} << 32) | x); }

  // <parent> became (or is) D1 and gained a DCS edge to <u,v>.
  void top_down_plus(VertexId u, VertexId v, std::uint32_t row, std::uint32_t parent_index) {
    auto& count = n1(u, row, parent_index);
    if (count == 0) {
      auto& covered = node(u).n1_parents[row];
      if (++covered == plan_.parent_count(u)) q1_.emplace_back(u, v);
    }
    ++count;
  }

  // <child> became (or is) D2 and gained a DCS edge to <u,v>.
  void bottom_up_plus(VertexId u, VertexId v, std::uint32_t row, std::uint32_t child_index) {
    auto& count = n2_child(u, row, child_index);
    if (count == 0) {
      auto& covered = node(u).n2_children[row];
      if (++covered == plan_.child_count(u) && node(u).d1[row]) q2_.emplace_back(u, v);
    }
    ++count;
  }

  void top_down_minus(VertexId u, VertexId v, std::uint32_t row, std::uint32_t parent_index) {
    auto& count = n1(u, row, parent_index);
    if (count == 1) {
      auto& covered = node(u).n1_parents[row];
      if (node(u).d1[row] && covered == plan_.parent_count(u)) q1_.emplace_back(u, v);
      decrement(covered);
    }
    decrement(count);
  }

  void bottom_up_minus(VertexId u, VertexId v, std::uint32_t row, std::uint32_t child_index) {
    auto& count = n2_child(u, row, child_index);
    if (count == 1) {
      auto& covered = node(u).n2_children[row];
      if (node(u).d2[row] && covered == plan_.child_count(u)) q2_.emplace_back(u, v);
      decrement(covered);
    }
    decrement(count);
  }

  void clear_d2(VertexId u, VertexId x, std::uint32_t row) {
    for (std::size_t k = 0; k < plan_.slots[u].size(); ++k) {
      const auto& slot = plan_.slots[u][k];
      for_each_dcs_neighbor(plan_, graph_, u, x, k, [&](VertexId y) {
        ++stats_.visited_edges;
        auto yrow = graph_.label_rank(y);
        if (slot.is_parent) {
          bottom_up_minus(slot.vertex, y, yrow, slot.back_role_index);
        } else {
          decrement(n2_parent(slot.vertex, yrow, slot.back_role_index));
        }
      });
    }
    node(u).d2[row] = 0;
  }

  Dcs& dcs_;
  const QueryPlan& plan_;
  const DataGraph& graph_;
  UpdateStats& stats_;
  std::vector<CandidatePair>* touched_out_;
  std::deque<std::pair<VertexId, VertexId>> q1_;
  std::deque<std::pair<VertexId, VertexId>> q2_;
  std::unordered_set<std::uint64_t> touched_;
};

void Dcs::insert_edges(const DataGraph& graph, std::span<const DcsEdge> edges, UpdateStats& stats,
                       std::vector<CandidatePair>* touched) {
  DcsPropagation(*this, graph, stats, touched).insert(edges);
}

void Dcs::delete_edges(const DataGraph& graph, std::span<const DcsEdge> edges, UpdateStats& stats,
                       std::vector<CandidatePair>* touched) {
  DcsPropagation(*this, graph, stats, touched).remove(edges);
}

std::size_t Dcs::degree(const DataGraph& graph, VertexId u, VertexId v) const {
  std::size_t count = 0;
  for (std::size_t k = 0; k < plan_->slots[u].size(); ++k) {
    for_each_dcs_neighbor(*plan_, graph, u, v, k, [&](VertexId) { ++count; });
  }
  return count;
}

void Dcs::add_vertex(const DataGraph& graph, VertexId v) {
  const auto& q = plan_->query;
  for (VertexId u = 0; u < q.size(); ++u) {
    if (q.label(u) != graph.label(v)) continue;
    auto& node = nodes_[u];
    if (graph.label_rank(v) != node.d1.size()) throw InvariantError("DCS rows out of sync");
    const bool root_like = plan_->parent_count(u) == 0;
    node.d1.push_back(root_like);
    node.d2.push_back(root_like && plan_->child_count(u) == 0);
    node.n1.resize(node.n1.size() + plan_->parent_count(u), 0);
    node.n1_parents.push_back(0);
    node.n2_child.resize(node.n2_child.size() + plan_->child_count(u), 0);
    node.n2_children.push_back(0);
    node.n2_parent.resize(node.n2_parent.size() + plan_->parent_count(u), 0);
  }
}

void Dcs::remove_vertex(const DataGraph& graph, VertexId v) {
  const auto& q = plan_->query;
  const std::uint32_t row = graph.label_rank(v);
  auto move_last = [row](auto& values, std::size_t width) {
    const std::size_t last = values.size() / std::max<std::size_t>(width, 1) - 1;
    if (width == 0) return;
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(last * width), width,
                values.begin() + static_cast<std::ptrdiff_t>(row * width));
    values.resize(values.size() - width);
  };
  for (VertexId u = 0; u < q.size(); ++u) {
    if (q.label(u) != graph.label(v)) continue;
    auto& node = nodes_[u];
    if (row >= node.d1.size()) throw InvariantError("DCS rows out of sync");
    move_last(node.d1, 1);
    move_last(node.d2, 1);
    move_last(node.n1_parents, 1);
    move_last(node.n2_children, 1);
    move_last(node.n1, plan_->parent_count(u));
    move_last(node.n2_parent, plan_->parent_count(u));
    move_last(node.n2_child, plan_->child_count(u));
  }
}

DcsFootprint Dcs::footprint() const {
  DcsFootprint f;
  for (const auto& node : nodes_) {
    f.update_entries +=
        node.n1.size() + node.n2_child.size() + node.n1_parents.size() + node.n2_children.size();
    f.support_entries += node.n2_parent.size();
  }
  return f;
}

std::vector<std::string> Dcs::check_consistency(const DataGraph& graph) const {
  std::vector<std::string> problems;
  const auto& q = plan_->query;
  auto report = [&](VertexId u, VertexId v, const std::string& what) {
    std::ostringstream msg;
    msg << "<u" << u << ",v" << graph.external_id(v) << ">: " << what;
    problems.push_back(msg.str());
  };
  for (VertexId u = 0; u < q.size(); ++u) {
    auto members = graph.vertices_with_label(q.label(u));
    if (members.size() != rows(u)) {
      problems.push_back("row count mismatch for u" + std::to_string(u));
      continue;
    }
    for (std::uint32_t row = 0; row < members.size(); ++row) {
      VertexId v = members[row];
      std::uint32_t covered_parents = 0;
      std::uint32_t covered_children = 0;
      for (std::size_t k = 0; k < plan_->slots[u].size(); ++k) {
        const auto& slot = plan_->slots[u][k];
        auto d2_count = count_dcs_neighbors(*plan_, graph, u, v, k, nodes_[slot.vertex].d2);
        if (n2(u, row, k) != d2_count) report(u, v, "N2 recount differs");
        if (slot.is_parent) {
          auto d1_count = count_dcs_neighbors(*plan_, graph, u, v, k, nodes_[slot.vertex].d1);
          if (n1(u, row, slot.role_index) != d1_count) report(u, v, "N1 recount differs");
          covered_parents += d1_count != 0;
        } else {
          covered_children += d2_count != 0;
        }
      }
      if (n1_parents(u, row) != covered_parents) report(u, v, "N1_P recount differs");
      if (n2_children(u, row) != covered_children) report(u, v, "N2_C recount differs");
      if (d1(u, row) != (n1_parents(u, row) == plan_->parent_count(u))) {
        report(u, v, "D1 disagrees with N1_P");
      }
      if (d2(u, row) != (d1(u, row) && n2_children(u, row) == plan_->child_count(u))) {
        report(u, v, "D2 disagrees with D1/N2_C");
      }
    }
  }
  return problems;
}

std::vector<DcsEdge> dcs_changed_edges(const DataGraph& graph, const QueryPlan& plan, VertexId src,
                                       VertexId dst, LabelId label) {
  std::vector<DcsEdge> result;
  const auto& q = plan.query;
  auto consider = [&](VertexId qa, VertexId da, VertexId qb, VertexId db) {
    if (q.label(qa) != graph.label(da) || q.label(qb) != graph.label(db)) return;
    const auto& parents = plan.dag.parents[qb];
    bool a_is_parent = std::binary_search(parents.begin(), parents.end(), qa);
    if (a_is_parent) {
      result.push_back({{qa, da}, {qb, db}});
    } else {
      result.push_back({{qb, db}, {qa, da}});
    }
  };
  for (const auto& e : q.edges()) {
    if (e.label != label) continue;
    consider(e.src, src, e.dst, dst);
    if (!graph.directed()) consider(e.src, dst, e.dst, src);
  }
  return result;
}

}  // namespace csm
