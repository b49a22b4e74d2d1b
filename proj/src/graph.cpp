#include "csm/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <tuple>

namespace csm {

ParseError::ParseError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

StreamError::StreamError(std::size_t op_index, const std::string& what)
    : Error("op " + std::to_string(op_index) + ": " + what), op_index_(op_index) {}

LabelId LabelTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  auto id = static_cast<LabelId>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

std::optional<LabelId> LabelTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string& LabelTable::name(LabelId id) const { return names_.at(id); }

Vocabulary::Vocabulary() { edge_labels.intern(""); }

// ---------------------------------------------------------------------------
// DataGraph

DataGraph::DataGraph(GraphOptions options) : options_(options) {}

std::optional<VertexId> DataGraph::find(ExternalId id) const {
  auto it = by_external_.find(id);
  if (it == by_external_.end()) return std::nullopt;
  return it->second;
}

VertexId DataGraph::add_vertex(ExternalId id, LabelId label) {
  if (by_external_.contains(id)) {
    throw Error("duplicate vertex id " + std::to_string(id));
  }
  auto v = static_cast<VertexId>(labels_.size());
  labels_.push_back(label);
  alive_.push_back(1);
  external_ids_.push_back(id);
  auto& members = members_[label];
  ranks_.push_back(static_cast<std::uint32_t>(members.size()));
  members.push_back(v);
  by_external_.emplace(id, v);
  out_.emplace_back();
  in_.emplace_back();
  return v;
}

void DataGraph::remove_vertex(VertexId v) {
  if (!contains(v)) throw Error("unknown vertex slot " + std::to_string(v));
  if (!out_[v].all.empty() || !in_[v].all.empty()) {
    throw Error("vertex " + std::to_string(external_ids_[v]) + " still has incident edges");
  }
  auto& members = members_.at(labels_[v]);
  std::uint32_t rank = ranks_[v];
  VertexId last = members.back();
  members[rank] = last;
  ranks_[last] = rank;
  members.pop_back();
  if (members.empty()) members_.erase(labels_[v]);
  ranks_[v] = 0;
  alive_[v] = 0;
  by_external_.erase(external_ids_[v]);
}

std::uint64_t DataGraph::edge_key(VertexId src, VertexId dst) const noexcept {
  if (!options_.directed && dst < src) std::swap(src, dst);
  return (std::uint64_t{src} << 32) | dst;
}

std::optional<LabelId> DataGraph::edge_label(VertexId src, VertexId dst) const {
  auto it = edges_.find(edge_key(src, dst));
  if (it == edges_.end()) return std::nullopt;
  return it->second;
}

void DataGraph::link(Adjacency& adj, VertexId other, LabelId edge_label) {
  Neighbor entry{other, edge_label};
  adj.all.insert(std::lower_bound(adj.all.begin(), adj.all.end(), entry), entry);
  LabelId other_label = labels_[other];
  auto bucket = std::lower_bound(adj.by_label.begin(), adj.by_label.end(), other_label,
                                 [](const LabelBucket& b, LabelId l) { return b.label < l; });
  if (bucket == adj.by_label.end() || bucket->label != other_label) {
    bucket = adj.by_label.insert(bucket, LabelBucket{other_label, {}});
  }
  auto& list = bucket->neighbors;
  list.insert(std::lower_bound(list.begin(), list.end(), entry), entry);
}

void DataGraph::unlink(Adjacency& adj, VertexId other) {
  auto by_vertex = [](const Neighbor& n, VertexId v) { return n.vertex < v; };
  auto it = std::lower_bound(adj.all.begin(), adj.all.end(), other, by_vertex);
  adj.all.erase(it);
  LabelId other_label = labels_[other];
  auto bucket = std::lower_bound(adj.by_label.begin(), adj.by_label.end(), other_label,
                                 [](const LabelBucket& b, LabelId l) { return b.label < l; });
  auto& list = bucket->neighbors;
  list.erase(std::lower_bound(list.begin(), list.end(), other, by_vertex));
  if (list.empty()) adj.by_label.erase(bucket);
}

void DataGraph::add_edge(VertexId src, VertexId dst, LabelId label) {
  if (!contains(src) || !contains(dst)) throw Error("edge references unknown vertex");
  if (src == dst) throw Error("self-loop on vertex " + std::to_string(external_ids_[src]));
  auto key = edge_key(src, dst);
  if (edges_.contains(key)) {
    throw Error("duplicate edge " + std::to_string(external_ids_[src]) + " " +
                std::to_string(external_ids_[dst]));
  }
  edges_.emplace(key, label);
  link(out_[src], dst, label);
  if (options_.directed) {
    link(in_[dst], src, label);
  } else {
    link(out_[dst], src, label);
  }
}

LabelId DataGraph::remove_edge(VertexId src, VertexId dst) {
  auto it = edges_.find(edge_key(src, dst));
  if (it == edges_.end() || !contains(src) || !contains(dst)) {
    throw Error("edge not present");
  }
  LabelId label = it->second;
  edges_.erase(it);
  unlink(out_[src], dst);
  if (options_.directed) {
    unlink(in_[dst], src);
  } else {
    unlink(out_[dst], src);
  }
  return label;
}

const DataGraph::Adjacency& DataGraph::adjacency(VertexId v, Direction dir) const {
  if (options_.directed && dir == Direction::In) return in_.at(v);
  return out_.at(v);
}

std::span<const Neighbor> DataGraph::neighbors(VertexId v, Direction dir) const {
  return adjacency(v, dir).all;
}

std::span<const Neighbor> DataGraph::neighbors_with_label(VertexId v, LabelId vertex_label,
                                                          Direction dir) const {
  const auto& buckets = adjacency(v, dir).by_label;
  auto bucket = std::lower_bound(buckets.begin(), buckets.end(), vertex_label,
                                 [](const LabelBucket& b, LabelId l) { return b.label < l; });
  if (bucket == buckets.end() || bucket->label != vertex_label) return {};
  return bucket->neighbors;
}

std::span<const VertexId> DataGraph::vertices_with_label(LabelId label) const {
  auto it = members_.find(label);
  if (it == members_.end()) return {};
  return it->second;
}

// ---------------------------------------------------------------------------
// QueryGraph

QueryGraph QueryGraph::from_graph(const DataGraph& graph) {
  QueryGraph q;
  q.directed_ = graph.directed();
  std::vector<VertexId> slot_to_query(graph.vertex_slots(), kNoVertex);
  for (VertexId v = 0; v < graph.vertex_slots(); ++v) {
    if (!graph.contains(v)) continue;
    slot_to_query[v] = static_cast<VertexId>(q.labels_.size());
    q.labels_.push_back(graph.label(v));
    q.external_ids_.push_back(graph.external_id(v));
  }
  q.neighbors_.resize(q.labels_.size());
  for (VertexId v = 0; v < graph.vertex_slots(); ++v) {
    if (!graph.contains(v)) continue;
    for (const auto& n : graph.neighbors(v, Direction::Out)) {
      VertexId a = slot_to_query[v];
      VertexId b = slot_to_query[n.vertex];
      if (!q.directed_ && b < a) continue;  // undirected edges are listed from both ends
      if (q.directed_ && graph.edge_label(n.vertex, v)) {
        throw QueryError("directed query has edges in both directions between " +
                         std::to_string(graph.external_id(v)) + " and " +
                         std::to_string(graph.external_id(n.vertex)));
      }
      q.edges_.push_back({a, b, n.edge_label});
      q.neighbors_[a].push_back({b, n.edge_label, true});
      q.neighbors_[b].push_back({a, n.edge_label, !q.directed_});
    }
  }
  std::sort(q.edges_.begin(), q.edges_.end(), [](const QueryEdge& x, const QueryEdge& y) {
    return std::tie(x.src, x.dst) < std::tie(y.src, y.dst);
  });
  for (auto& list : q.neighbors_) {
    std::sort(list.begin(), list.end(),
              [](const QueryNeighbor& x, const QueryNeighbor& y) { return x.vertex < y.vertex; });
  }

  if (!q.labels_.empty()) {
    std::vector<char> seen(q.size(), 0);
    std::queue<VertexId> pending;
    pending.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!pending.empty()) {
      VertexId u = pending.front();
      pending.pop();
      for (const auto& n : q.neighbors_[u]) {
        if (seen[n.vertex]) continue;
        seen[n.vertex] = 1;
        ++reached;
        pending.push(n.vertex);
      }
    }
    q.connected_ = reached == q.size();
  }
  return q;
}

std::optional<std::size_t> QueryGraph::neighbor_slot(VertexId u, VertexId w) const {
  const auto& list = neighbors_.at(u);
  auto it = std::lower_bound(list.begin(), list.end(), w,
                             [](const QueryNeighbor& n, VertexId v) { return n.vertex < v; });
  if (it == list.end() || it->vertex != w) return std::nullopt;
  return static_cast<std::size_t>(it - list.begin());
}

// ---------------------------------------------------------------------------
// Text formats

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

bool is_skippable(const std::vector<std::string_view>& tokens) {
  return tokens.empty() || tokens.front().front() == '#';
}

ExternalId parse_id(std::string_view token, std::size_t line) {
  ExternalId value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a non-negative integer id, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

DataGraph parse_graph(std::istream& in, Vocabulary& vocab, const GraphOptions& options) {
  DataGraph graph(options);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto tokens = split_tokens(line);
    if (is_skippable(tokens)) continue;
    const auto tag = tokens[0];
    if (tag == "v") {
      if (tokens.size() != 3) throw ParseError(number, "expected 'v <id> <label>'");
      ExternalId id = parse_id(tokens[1], number);
      if (graph.find(id)) throw ParseError(number, "duplicate vertex id " + std::to_string(id));
      graph.add_vertex(id, vocab.vertex_labels.intern(tokens[2]));
    } else if (tag == "e") {
      if (tokens.size() < 3 || tokens.size() > 4) {
        throw ParseError(number, "expected 'e <src> <dst> [<elabel>]'");
      }
      ExternalId a = parse_id(tokens[1], number);
      ExternalId b = parse_id(tokens[2], number);
      auto src = graph.find(a);
      auto dst = graph.find(b);
      if (!src || !dst) {
        throw ParseError(number, "edge references unknown vertex " + std::to_string(src ? b : a));
      }
      if (*src == *dst) throw ParseError(number, "self-loop on vertex " + std::to_string(a));
      if (graph.edge_label(*src, *dst)) {
        throw ParseError(number, "duplicate edge " + std::to_string(a) + " " + std::to_string(b));
      }
      LabelId label = kUnlabeledEdge;
      if (options.edge_labels) {
        if (tokens.size() != 4) throw ParseError(number, "missing edge label");
        label = vocab.edge_labels.intern(tokens[3]);
      }
      graph.add_edge(*src, *dst, label);
    } else {
      throw ParseError(number, "unknown record '" + std::string(tag) + "'");
    }
  }
  return graph;
}

DataGraph parse_graph_text(std::string_view text, Vocabulary& vocab, const GraphOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_graph(in, vocab, options);
}

std::optional<UpdateOp> parse_update_line(std::string_view text, std::size_t number) {
  auto tokens = split_tokens(text);
  if (is_skippable(tokens)) return std::nullopt;
  UpdateOp op;
  op.line = number;
  const auto tag = tokens[0];
  if (tag == "+" || tag == "-") {
    if (tokens.size() < 3 || tokens.size() > 4) {
      throw ParseError(number, "expected '" + std::string(tag) + " <src> <dst> [<elabel>]'");
    }
    op.kind = tag == "+" ? OpKind::EdgeInsert : OpKind::EdgeDelete;
    op.first = parse_id(tokens[1], number);
    op.second = parse_id(tokens[2], number);
    if (tokens.size() == 4) op.label = std::string(tokens[3]);
  } else if (tag == "v+") {
    if (tokens.size() != 3) throw ParseError(number, "expected 'v+ <id> <label>'");
    op.kind = OpKind::VertexInsert;
    op.first = parse_id(tokens[1], number);
    op.label = std::string(tokens[2]);
  } else if (tag == "v-") {
    if (tokens.size() != 2) throw ParseError(number, "expected 'v- <id>'");
    op.kind = OpKind::VertexDelete;
    op.first = parse_id(tokens[1], number);
  } else {
    throw ParseError(number, "unknown update '" + std::string(tag) + "'");
  }
  return op;
}

std::vector<UpdateOp> parse_update_stream(std::istream& in) {
  std::vector<UpdateOp> ops;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto op = parse_update_line(line, number)) ops.push_back(std::move(*op));
  }
  return ops;
}

std::vector<UpdateOp> parse_update_stream_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_update_stream(in);
}

LabelId resolve_edge_label(const DataGraph& graph, const UpdateOp& op, Vocabulary& vocab,
                           std::size_t op_index) {
  if (!graph.options().edge_labels) return kUnlabeledEdge;
  if (op.kind == OpKind::EdgeInsert) {
    if (!op.label) throw StreamError(op_index, "edge insertion without an edge label");
    return vocab.edge_labels.intern(*op.label);
  }
  auto src = graph.find(op.first);
  auto dst = graph.find(op.second);
  auto present = (src && dst) ? graph.edge_label(*src, *dst) : std::nullopt;
  if (!present) throw StreamError(op_index, "deleting an edge that is not present");
  if (op.label && vocab.edge_labels.find(*op.label) != present) {
    throw StreamError(op_index, "edge label does not match the stored edge");
  }
  return *present;
}

void apply_update(DataGraph& graph, const UpdateOp& op, Vocabulary& vocab, std::size_t op_index) {
  switch (op.kind) {
    case OpKind::VertexInsert: {
      if (graph.find(op.first)) {
        throw StreamError(op_index, "vertex " + std::to_string(op.first) + " already exists");
      }
      graph.add_vertex(op.first, vocab.vertex_labels.intern(op.label.value_or("")));
      return;
    }
    case OpKind::VertexDelete: {
      auto v = graph.find(op.first);
      if (!v) throw StreamError(op_index, "vertex " + std::to_string(op.first) + " does not exist");
      if (!graph.neighbors(*v, Direction::Out).empty() ||
          !graph.neighbors(*v, Direction::In).empty()) {
        throw StreamError(op_index, "vertex " + std::to_string(op.first) + " still has edges");
      }
      graph.remove_vertex(*v);
      return;
    }
    case OpKind::EdgeInsert:
    case OpKind::EdgeDelete:
      break;
  }
  auto src = graph.find(op.first);
  auto dst = graph.find(op.second);
  if (!src || !dst) throw StreamError(op_index, "edge references unknown vertex");
  if (op.kind == OpKind::EdgeInsert) {
    if (*src == *dst) throw StreamError(op_index, "self-loop");
    if (graph.edge_label(*src, *dst)) throw StreamError(op_index, "edge already present");
    graph.add_edge(*src, *dst, resolve_edge_label(graph, op, vocab, op_index));
  } else {
    resolve_edge_label(graph, op, vocab, op_index);
    graph.remove_edge(*src, *dst);
  }
}

void write_graph(std::ostream& out, const DataGraph& graph, const Vocabulary& vocab) {
  for (VertexId v = 0; v < graph.vertex_slots(); ++v) {
    if (!graph.contains(v)) continue;
    out << "v " << graph.external_id(v) << ' ' << vocab.vertex_labels.name(graph.label(v)) << '\n';
  }
  for (VertexId v = 0; v < graph.vertex_slots(); ++v) {
    if (!graph.contains(v)) continue;
    for (const auto& n : graph.neighbors(v, Direction::Out)) {
      if (!graph.directed() && n.vertex < v) continue;
      out << "e " << graph.external_id(v) << ' ' << graph.external_id(n.vertex);
      if (graph.options().edge_labels) out << ' ' << vocab.edge_labels.name(n.edge_label);
      out << '\n';
    }
  }
}

void write_update(std::ostream& out, const UpdateOp& op) {
  switch (op.kind) {
    case OpKind::EdgeInsert:
    case OpKind::EdgeDelete:
      out << (op.kind == OpKind::EdgeInsert ? "+ " : "- ") << op.first << ' ' << op.second;
      if (op.label) out << ' ' << *op.label;
      break;
    case OpKind::VertexInsert:
      out << "v+ " << op.first << ' ' << op.label.value_or("");
      break;
    case OpKind::VertexDelete:
      out << "v- " << op.first;
      break;
  }
  out << '\n';
}

}  // namespace csm
