#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "csm/engine.hpp"
#include "csm/workload.hpp"

namespace csm::test {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Instance {
  Vocabulary vocab;
  DataGraph graph;
  QueryGraph query;
  std::vector<UpdateOp> stream;
};

inline Instance load_texts(const std::string& graph, const std::string& query,
                           const std::string& stream, GraphOptions options = {}) {
  Instance in;
  in.graph = parse_graph_text(graph, in.vocab, options);
  in.query = QueryGraph::from_graph(parse_graph_text(query, in.vocab, options));
  in.stream = parse_update_stream_text(stream);
  return in;
}

inline Instance running_example() {
  const std::string dir = std::string(CSM_TEST_DATA_DIR) + "/running_example/";
  return load_texts(read_text(dir + "graph"), read_text(dir + "query"), read_text(dir + "stream"));
}

/// Shape of the randomized trials: small graphs, random-walk queries.
struct TrialShape {
  std::uint32_t max_vertices = 15;
  std::uint32_t max_edges = 30;
  std::uint32_t min_labels = 2;
  std::uint32_t max_labels = 4;
  std::uint32_t min_query_edges = 3;
  std::uint32_t max_query_edges = 6;
  std::uint32_t ops = 50;
  double max_deletion_rate = 30;
  bool allow_directed = true;
  bool allow_edge_labels = true;
};

struct Trial {
  WorkloadParams params;
  Instance instance;
};

/// Deterministic in `seed`; retries with derived seeds when the walk fails.
inline Trial random_trial(std::uint64_t seed, const TrialShape& shape = {}) {
  std::mt19937_64 rng(seed);
  auto uniform = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(rng);
  };
  for (int attempt = 0;; ++attempt) {
    WorkloadParams p;
    p.seed = rng();
    p.vertices = uniform(6, shape.max_vertices);
    p.labels = uniform(shape.min_labels, shape.max_labels);
    p.directed = shape.allow_directed && uniform(0, 3) == 0;
    p.edge_labels = shape.allow_edge_labels && uniform(0, 4) == 0 ? 2 : 0;
    const std::uint32_t pairs = p.vertices * (p.vertices - 1) / (p.directed ? 1 : 2);
    p.edges = uniform(p.vertices, std::min(shape.max_edges, pairs));
    p.ops = shape.ops;
    p.deletion_rate = std::uniform_real_distribution<double>(0, shape.max_deletion_rate)(rng);
    p.query_edges = uniform(shape.min_query_edges, shape.max_query_edges);
    try {
      auto w = generate_workload(p);
      GraphOptions options{p.edge_labels != 0, p.directed};
      return {p, load_texts(w.graph, w.query, w.stream, options)};
    } catch (const Error&) {
      if (attempt > 100) throw;
    }
  }
}

inline std::optional<EdgeChange> edge_change(const DataGraph& g, const UpdateOp& op,
                                              Vocabulary& vocab, std::size_t index) {
  if (op.kind != OpKind::EdgeInsert && op.kind != OpKind::EdgeDelete) return std::nullopt;
  auto src = g.find(op.first);
  auto dst = g.find(op.second);
  if (!src || !dst) throw StreamError(index, "unknown vertex");
  return EdgeChange{*src, *dst, resolve_edge_label(g, op, vocab, index),
                    op.kind == OpKind::EdgeInsert};
}

}  // namespace csm::test
