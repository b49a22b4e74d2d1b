#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace csm {

using VertexId = std::uint32_t;
using LabelId = std::uint32_t;
using ExternalId = std::uint64_t;

inline constexpr VertexId kNoVertex = ~VertexId{0};

/// Edge label carried by every edge when edge labels are disabled.
inline constexpr LabelId kUnlabeledEdge = 0;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An update op that is inconsistent with the graph it is applied to.
class StreamError : public Error {
 public:
  StreamError(std::size_t op_index, const std::string& what);
  std::size_t op_index() const noexcept { return op_index_; }

 private:
  std::size_t op_index_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class QueryError : public Error {
 public:
  using Error::Error;
};

class LimitError : public Error {
 public:
  using Error::Error;
};

/// Raised when an internal counter or stack leaves its valid range.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Bijective string <-> id interning.
class LabelTable {
 public:
  LabelId intern(std::string_view name);
  std::optional<LabelId> find(std::string_view name) const;
  const std::string& name(LabelId id) const;
  std::size_t size() const noexcept { return names_.size(); }

  bool operator==(const LabelTable&) const = default;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, LabelId> ids_;
};

/// Label tables shared by the data graph, the query, and the update stream.
struct Vocabulary {
  Vocabulary();

  LabelTable vertex_labels;
  LabelTable edge_labels;  // id 0 is the unlabeled sentinel

  bool operator==(const Vocabulary&) const = default;
};

struct GraphOptions {
  bool edge_labels = false;
  bool directed = false;

  bool operator==(const GraphOptions&) const = default;
};

enum class Direction : std::uint8_t { Out, In };

struct Neighbor {
  VertexId vertex = kNoVertex;
  LabelId edge_label = kUnlabeledEdge;

  auto operator<=>(const Neighbor&) const = default;
};

/// Dynamic vertex- and edge-labeled graph.
///
/// Vertex ids are dense internal slots; the external id from the input file
/// is kept for output. Removed vertices leave a dead slot behind. Adjacency
/// lists are kept sorted so edge insert/delete pairs restore an identical
/// graph. Label classes are swap-removed, so vertex deletion reorders ranks.
/// In undirected mode only the Out lists are populated and In aliases them.
class DataGraph {
 public:
  DataGraph() = default;
  explicit DataGraph(GraphOptions options);

  const GraphOptions& options() const noexcept { return options_; }
  bool directed() const noexcept { return options_.directed; }

  std::size_t vertex_slots() const noexcept { return labels_.size(); }
  std::size_t vertex_count() const noexcept { return by_external_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool contains(VertexId v) const noexcept {
    return v < alive_.size() && alive_[v] != 0;
  }
  LabelId label(VertexId v) const { return labels_.at(v); }
  ExternalId external_id(VertexId v) const { return external_ids_.at(v); }
  std::optional<VertexId> find(ExternalId id) const;

  VertexId add_vertex(ExternalId id, LabelId label);
  /// Requires the vertex to have no incident edges.
  void remove_vertex(VertexId v);

  void add_edge(VertexId src, VertexId dst, LabelId label);
  /// Returns the label of the removed edge.
  LabelId remove_edge(VertexId src, VertexId dst);

  /// Label of edge src->dst (either orientation when undirected).
  std::optional<LabelId> edge_label(VertexId src, VertexId dst) const;
  bool has_edge(VertexId src, VertexId dst, LabelId label) const {
    auto found = edge_label(src, dst);
    return found && *found == label;
  }

  std::span<const Neighbor> neighbors(VertexId v, Direction dir = Direction::Out) const;
  /// Neighbors of v whose vertex label is `vertex_label`.
  std::span<const Neighbor> neighbors_with_label(VertexId v, LabelId vertex_label,
                                                 Direction dir = Direction::Out) const;

  /// Live vertices carrying `label`, in rank order.
  std::span<const VertexId> vertices_with_label(LabelId label) const;
  /// Position of v inside vertices_with_label(label(v)).
  std::uint32_t label_rank(VertexId v) const { return ranks_.at(v); }

  bool operator==(const DataGraph&) const = default;

 private:
  struct LabelBucket {
    LabelId label = 0;
    std::vector<Neighbor> neighbors;

    bool operator==(const LabelBucket&) const = default;
  };
  struct Adjacency {
    std::vector<Neighbor> all;
    std::vector<LabelBucket> by_label;  // sorted by label

    bool operator==(const Adjacency&) const = default;
  };

  std::uint64_t edge_key(VertexId src, VertexId dst) const noexcept;
  const Adjacency& adjacency(VertexId v, Direction dir) const;
  void link(Adjacency& adj, VertexId other, LabelId edge_label);
  void unlink(Adjacency& adj, VertexId other);

  GraphOptions options_;
  std::vector<LabelId> labels_;
  std::vector<std::uint8_t> alive_;
  std::vector<ExternalId> external_ids_;
  std::vector<std::uint32_t> ranks_;
  std::unordered_map<ExternalId, VertexId> by_external_;
  std::vector<Adjacency> out_;
  std::vector<Adjacency> in_;
  std::unordered_map<LabelId, std::vector<VertexId>> members_;
  std::unordered_map<std::uint64_t, LabelId> edges_;
};

struct QueryNeighbor {
  VertexId vertex = kNoVertex;
  LabelId edge_label = kUnlabeledEdge;
  /// True when the query edge points from the owner to `vertex`. Always true
  /// for undirected queries.
  bool outgoing = true;
};

struct QueryEdge {
  VertexId src = kNoVertex;
  VertexId dst = kNoVertex;
  LabelId label = kUnlabeledEdge;
};

/// Immutable query graph. Vertex ids are 0..size()-1 in file order.
class QueryGraph {
 public:
  QueryGraph() = default;

  /// Copies a parsed graph. Rejects antiparallel edges in directed mode.
  static QueryGraph from_graph(const DataGraph& graph);

  std::size_t size() const noexcept { return labels_.size(); }
  bool directed() const noexcept { return directed_; }
  bool connected() const noexcept { return connected_; }
  LabelId label(VertexId u) const { return labels_.at(u); }
  ExternalId external_id(VertexId u) const { return external_ids_.at(u); }
  const std::vector<QueryEdge>& edges() const noexcept { return edges_; }
  /// Neighbors of u sorted by vertex id.
  std::span<const QueryNeighbor> neighbors(VertexId u) const { return neighbors_.at(u); }
  std::size_t degree(VertexId u) const { return neighbors_.at(u).size(); }
  /// Index of w inside neighbors(u).
  std::optional<std::size_t> neighbor_slot(VertexId u, VertexId w) const;

 private:
  bool directed_ = false;
  bool connected_ = true;
  std::vector<LabelId> labels_;
  std::vector<ExternalId> external_ids_;
  std::vector<QueryEdge> edges_;
  std::vector<std::vector<QueryNeighbor>> neighbors_;
};

enum class OpKind : std::uint8_t { EdgeInsert, EdgeDelete, VertexInsert, VertexDelete };

struct UpdateOp {
  OpKind kind = OpKind::EdgeInsert;
  ExternalId first = 0;   // edge source, or the vertex for vertex ops
  ExternalId second = 0;  // edge target; unused for vertex ops
  /// Edge label for edge ops (optional), vertex label for vertex-insert.
  std::optional<std::string> label;
  std::size_t line = 0;

  bool operator==(const UpdateOp&) const = default;
};

/// Parses `v <id> <label>` / `e <src> <dst> [<elabel>]` lines.
DataGraph parse_graph(std::istream& in, Vocabulary& vocab, const GraphOptions& options);
DataGraph parse_graph_text(std::string_view text, Vocabulary& vocab, const GraphOptions& options);

/// Parses `+ s d [l]`, `- s d [l]`, `v+ id label`, `v- id` lines.
std::vector<UpdateOp> parse_update_stream(std::istream& in);
std::vector<UpdateOp> parse_update_stream_text(std::string_view text);
/// Parses a single stream line; returns nullopt for blank and comment lines.
std::optional<UpdateOp> parse_update_line(std::string_view line, std::size_t line_number);

/// Resolves the edge label an op should carry on `graph`.
LabelId resolve_edge_label(const DataGraph& graph, const UpdateOp& op, Vocabulary& vocab,
                           std::size_t op_index);

/// Applies one op. Vertex-delete requires the vertex to be edge-free.
void apply_update(DataGraph& graph, const UpdateOp& op, Vocabulary& vocab, std::size_t op_index);

void write_graph(std::ostream& out, const DataGraph& graph, const Vocabulary& vocab);
void write_update(std::ostream& out, const UpdateOp& op);

}  // namespace csm
