#include "csm/engine.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

namespace csm {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

Engine::Engine(Vocabulary vocab, DataGraph graph, QueryGraph query, MatcherOptions options)
    : vocab_(std::move(vocab)),
      graph_(std::move(graph)),
      plan_(std::make_unique<QueryPlan>(QueryPlan::make(std::move(query)))),
      options_(options) {
  if (plan_->query.directed() != graph_.directed()) {
    throw QueryError("query and data graph disagree on directedness");
  }
  if (plan_->query.edges().empty()) throw QueryError("query needs at least one edge");
  dcs_ = Dcs::build(*plan_, graph_);
}

OpResult Engine::insert_edge(VertexId src, VertexId dst, LabelId label, const MatchSink& sink) {
  OpResult result;
  result.positive = true;
  auto start = Clock::now();
  auto changed = dcs_changed_edges(graph_, *plan_, src, dst, label);
  graph_.add_edge(src, dst, label);
  touched_.clear();
  dcs_.insert_edges(graph_, changed, result.update, record_touched_ ? &touched_ : nullptr);
  result.update_seconds = seconds_since(start);
  start = Clock::now();
  result.matches = find_matches(dcs_, graph_, changed, options_, result.match, sink);
  result.match_seconds = seconds_since(start);
  return result;
}

OpResult Engine::delete_edge(VertexId src, VertexId dst, const MatchSink& sink) {
  OpResult result;
  result.positive = false;
  auto label = graph_.edge_label(src, dst);
  if (!label) throw Error("deleting an edge that is not present");
  auto start = Clock::now();
  auto changed = dcs_changed_edges(graph_, *plan_, src, dst, *label);
  result.update_seconds = seconds_since(start);
  start = Clock::now();
  result.matches = find_matches(dcs_, graph_, changed, options_, result.match, sink);
  result.match_seconds = seconds_since(start);
  start = Clock::now();
  graph_.remove_edge(src, dst);
  touched_.clear();
  dcs_.delete_edges(graph_, changed, result.update, record_touched_ ? &touched_ : nullptr);
  result.update_seconds += seconds_since(start);
  return result;
}

OpResult Engine::apply(const UpdateOp& op, std::size_t op_index, const MatchSink& sink) {
  switch (op.kind) {
    case OpKind::VertexInsert: {
      if (graph_.find(op.first)) {
        throw StreamError(op_index, "vertex " + std::to_string(op.first) + " already exists");
      }
      auto v = graph_.add_vertex(op.first, vocab_.vertex_labels.intern(op.label.value_or("")));
      dcs_.add_vertex(graph_, v);
      return {};
    }
    case OpKind::VertexDelete: {
      auto v = graph_.find(op.first);
      if (!v) throw StreamError(op_index, "vertex " + std::to_string(op.first) + " does not exist");
      OpResult total;
      total.positive = false;
      auto drop = [&](VertexId src, VertexId dst) {
        auto r = delete_edge(src, dst, sink);
        total.matches += r.matches;
        total.update.updated_vertices += r.update.updated_vertices;
        total.update.visited_edges += r.update.visited_edges;
        total.update.changed_edges += r.update.changed_edges;
        total.match += r.match;
        total.update_seconds += r.update_seconds;
        total.match_seconds += r.match_seconds;
      };
      while (!graph_.neighbors(*v, Direction::Out).empty()) {
        drop(*v, graph_.neighbors(*v, Direction::Out).front().vertex);
      }
      if (graph_.directed()) {
        while (!graph_.neighbors(*v, Direction::In).empty()) {
          drop(graph_.neighbors(*v, Direction::In).front().vertex, *v);
        }
      }
      dcs_.remove_vertex(graph_, *v);
      graph_.remove_vertex(*v);
      return total;
    }
    case OpKind::EdgeInsert:
    case OpKind::EdgeDelete:
      break;
  }
  auto src = graph_.find(op.first);
  auto dst = graph_.find(op.second);
  if (!src || !dst) throw StreamError(op_index, "edge references unknown vertex");
  if (op.kind == OpKind::EdgeInsert) {
    if (*src == *dst) throw StreamError(op_index, "self-loop");
    if (graph_.edge_label(*src, *dst)) throw StreamError(op_index, "edge already present");
    return insert_edge(*src, *dst, resolve_edge_label(graph_, op, vocab_, op_index), sink);
  }
  if (!graph_.edge_label(*src, *dst)) {
    throw StreamError(op_index, "deleting an edge that is not present");
  }
  resolve_edge_label(graph_, op, vocab_, op_index);
  return delete_edge(*src, *dst, sink);
}

std::string format_match(const Engine& engine, std::span<const VertexId> mapping) {
  std::ostringstream line;
  line << 'm';
  const auto& q = engine.plan().query;
  for (VertexId u = 0; u < mapping.size(); ++u) {
    line << " u" << q.external_id(u) << ":v" << engine.graph().external_id(mapping[u]);
  }
  return line.str();
}

RunReport run_continuous_matching(Engine& engine, const std::vector<UpdateOp>& stream,
                                  const RunConfig& config, std::ostream* out,
                                  double preprocess_seconds) {
  RunReport report;
  report.preprocess_seconds = preprocess_seconds;
  engine.set_options(config.matcher);
  std::vector<std::string> lines;
  MatchSink sink;
  if (config.enumerate && out != nullptr) {
    sink = [&](std::span<const VertexId> m) { lines.push_back(format_match(engine, m)); };
  }

  const auto start = Clock::now();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (config.time_limit_seconds > 0 && seconds_since(start) > config.time_limit_seconds) {
      report.truncated = true;
      break;
    }
    lines.clear();
    auto r = engine.apply(stream[i], i + 1, sink);
    OpLine op{i + 1, r.positive, r.matches, r.update};
    report.ops.push_back(op);
    (r.positive ? report.total_positive : report.total_negative) += r.matches;
    report.match += r.match;
    if (r.positive) {
      report.phases.insert_update += r.update_seconds;
      report.phases.insert_match += r.match_seconds;
    } else {
      report.phases.delete_update += r.update_seconds;
      report.phases.delete_match += r.match_seconds;
    }
    if (out != nullptr) {
      *out << op.index << ' ' << (op.positive ? '+' : '-') << ' ' << op.matches << '\n';
      for (const auto& l : lines) *out << l << '\n';
      if (config.stats) {
        *out << "# stat " << op.index << " updated=" << r.update.updated_vertices
             << " visited=" << r.update.visited_edges << " edcs=" << r.update.changed_edges
             << '\n';
      }
    }
  }
  report.elapsed_seconds = seconds_since(start);

  if (out != nullptr) {
    *out << "# total ops=" << report.ops.size() << " positive=" << report.total_positive
         << " negative=" << report.total_negative << '\n';
    if (config.stats) {
      *out << "# search seeds=" << report.match.seeds_tried
           << " passed=" << report.match.seeds_passed
           << " extensions=" << report.match.extensions << '\n';
      const auto& p = report.phases;
      *out << "# time preprocess=" << report.preprocess_seconds
           << " elapsed=" << report.elapsed_seconds << " insert_update=" << p.insert_update
           << " insert_match=" << p.insert_match << " delete_update=" << p.delete_update
           << " delete_match=" << p.delete_match << '\n';
    }
    if (report.truncated) *out << "# truncated\n";
  }
  return report;
}

namespace {

struct Inputs {
  Vocabulary vocab;
  DataGraph graph;
  QueryGraph query;
  std::vector<UpdateOp> stream;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

Inputs load_inputs(const RunConfig& config) {
  const GraphOptions options{config.edge_labels, config.directed};
  Inputs inputs;
  auto data_in = open_input(config.graph_path);
  inputs.graph = parse_graph(data_in, inputs.vocab, options);
  auto query_in = open_input(config.query_path);
  inputs.query = QueryGraph::from_graph(parse_graph(query_in, inputs.vocab, options));
  auto stream_in = open_input(config.stream_path);
  inputs.stream = parse_update_stream(stream_in);
  return inputs;
}

}  // namespace

RunReport run_continuous_matching(const RunConfig& config, std::ostream* out) {
  const auto start = Clock::now();
  auto inputs = load_inputs(config);
  Engine engine(std::move(inputs.vocab), std::move(inputs.graph), std::move(inputs.query),
                config.matcher);
  return run_continuous_matching(engine, inputs.stream, config, out, seconds_since(start));
}

RunReport run_oracle(const RunConfig& config, std::ostream* out, const OracleLimits& limits) {
  auto in = load_inputs(config);
  auto& g = in.graph;
  const auto& q = in.query;
  const auto mode = config.matcher.semantics;
  RunReport report;
  auto current = enumerate_embeddings(q, g, mode, limits);
  for (std::size_t i = 0; i < in.stream.size(); ++i) {
    const auto& op = in.stream[i];
    const std::size_t index = i + 1;
    OpLine line{index, op.kind == OpKind::EdgeInsert || op.kind == OpKind::VertexInsert, 0, {}};
    EmbeddingSet delta;
    auto change_edge = [&](EdgeChange change) {
      auto d = delta_matches(q, g, change, mode, limits, &current);
      const auto& part = change.insert ? d.positive : d.negative;
      line.matches += part.size();
      delta.insert(part.begin(), part.end());
      current = std::move(d.after);
      if (change.insert) {
        g.add_edge(change.src, change.dst, change.label);
      } else {
        g.remove_edge(change.src, change.dst);
      }
    };
    switch (op.kind) {
      case OpKind::VertexInsert:
      case OpKind::VertexDelete: {
        if (op.kind == OpKind::VertexDelete) {
          auto v = g.find(op.first);
          if (!v) throw StreamError(index, "vertex " + std::to_string(op.first) + " does not exist");
          while (!g.neighbors(*v, Direction::Out).empty()) {
            auto n = g.neighbors(*v, Direction::Out).front();
            change_edge({*v, n.vertex, n.edge_label, false});
          }
          while (g.directed() && !g.neighbors(*v, Direction::In).empty()) {
            auto n = g.neighbors(*v, Direction::In).front();
            change_edge({n.vertex, *v, n.edge_label, false});
          }
        }
        apply_update(g, op, in.vocab, index);
        current = enumerate_embeddings(q, g, mode, limits);
        break;
      }
      case OpKind::EdgeInsert:
      case OpKind::EdgeDelete: {
        auto src = g.find(op.first);
        auto dst = g.find(op.second);
        if (!src || !dst) throw StreamError(index, "edge references unknown vertex");
        if (op.kind == OpKind::EdgeInsert) {
          if (*src == *dst) throw StreamError(index, "self-loop");
          if (g.edge_label(*src, *dst)) throw StreamError(index, "edge already present");
        }
        auto label = resolve_edge_label(g, op, in.vocab, index);
        change_edge({*src, *dst, label, op.kind == OpKind::EdgeInsert});
        break;
      }
    }
    report.ops.push_back(line);
    (line.positive ? report.total_positive : report.total_negative) += line.matches;
    if (out != nullptr) {
      *out << index << ' ' << (line.positive ? '+' : '-') << ' ' << line.matches << '\n';
      if (config.enumerate) {
        for (const auto& m : delta) {
          *out << 'm';
          for (VertexId u = 0; u < m.size(); ++u) {
            *out << " u" << q.external_id(u) << ":v" << g.external_id(m[u]);
          }
          *out << '\n';
        }
      }
    }
  }
  if (out != nullptr) {
    *out << "# total ops=" << report.ops.size() << " positive=" << report.total_positive
         << " negative=" << report.total_negative << '\n';
  }
  return report;
}

}  // namespace csm
