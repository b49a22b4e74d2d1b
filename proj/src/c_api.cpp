#include "csm/csm.h"

#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "csm/engine.hpp"
#include "csm/workload.hpp"

struct csm_engine {
  std::unique_ptr<csm::Engine> engine;
  std::size_t ops = 0;
};

namespace {

thread_local std::string last_error;

csm_status fail(csm_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
csm_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return CSM_OK;
  } catch (const csm::ParseError& e) {
    return fail(CSM_ERR_PARSE, e.what());
  } catch (const csm::StreamError& e) {
    return fail(CSM_ERR_STREAM, e.what());
  } catch (const csm::QueryError& e) {
    return fail(CSM_ERR_QUERY, e.what());
  } catch (const csm::LimitError& e) {
    return fail(CSM_ERR_LIMIT, e.what());
  } catch (const csm::IoError& e) {
    return fail(CSM_ERR_IO, e.what());
  } catch (const csm::Error& e) {
    return fail(CSM_ERR_INPUT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(CSM_ERR_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(CSM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(CSM_ERR_INTERNAL, "unknown failure");
  }
}

csm::MatcherOptions matcher_options(const csm_options& o) {
  csm::MatcherOptions m;
  m.semantics = o.homomorphism ? csm::MatchSemantics::Homomorphism : csm::MatchSemantics::Isomorphism;
  m.order = o.exact_order ? csm::OrderStrategy::Exact : csm::OrderStrategy::Estimated;
  m.postponement = o.leaf_only ? csm::Postponement::LeafOnly : csm::Postponement::IsolatedVertex;
  return m;
}

csm_options options_or_default(const csm_options* options) {
  csm_options o;
  csm_options_init(&o);
  return options ? *options : o;
}

csm_status make_engine(const std::string& graph_text, const std::string& query_text,
                       const csm_options& options, csm_engine** out) {
  return guarded([&] {
    const csm::GraphOptions go{options.edge_labels != 0, options.directed != 0};
    csm::Vocabulary vocab;
    auto graph = csm::parse_graph_text(graph_text, vocab, go);
    auto query = csm::QueryGraph::from_graph(csm::parse_graph_text(query_text, vocab, go));
    auto handle = std::make_unique<csm_engine>();
    handle->engine = std::make_unique<csm::Engine>(std::move(vocab), std::move(graph),
                                                   std::move(query), matcher_options(options));
    *out = handle.release();
  });
}

std::string read_file(const char* path) {
  std::ifstream in(path);
  if (!in) throw csm::IoError(std::string("cannot open ") + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void write_file(const char* path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw csm::IoError(std::string("cannot write ") + path);
  out << text;
  if (!out) throw csm::IoError(std::string("write failed for ") + path);
}

csm::RunConfig run_config(const csm_run_config& c) {
  csm::RunConfig r;
  r.graph_path = c.graph_path;
  r.stream_path = c.stream_path;
  r.query_path = c.query_path;
  r.matcher = matcher_options(c.options);
  r.enumerate = c.enumerate != 0;
  r.edge_labels = c.options.edge_labels != 0;
  r.directed = c.options.directed != 0;
  r.stats = c.stats != 0;
  r.time_limit_seconds = c.time_limit_seconds;
  return r;
}

template <class Run>
csm_status run_with_report(const csm_run_config* config, csm_run_summary* summary, Run&& run) {
  if (!config || !config->graph_path || !config->stream_path || !config->query_path) {
    return fail(CSM_ERR_ARGUMENT, "graph, stream and query paths are required");
  }
  if (config->time_limit_seconds < 0) return fail(CSM_ERR_ARGUMENT, "negative time limit");
  return guarded([&] {
    auto rc = run_config(*config);
    csm::RunReport report;
    if (config->report_path && *config->report_path) {
      std::ofstream out(config->report_path);
      if (!out) throw csm::IoError(std::string("cannot write ") + config->report_path);
      report = run(rc, &out);
    } else {
      report = run(rc, &std::cout);
      std::cout.flush();
    }
    if (summary) {
      summary->ops = report.ops.size();
      summary->positive = report.total_positive;
      summary->negative = report.total_negative;
      summary->truncated = report.truncated ? 1 : 0;
      summary->elapsed_seconds = report.elapsed_seconds;
    }
  });
}

}  // namespace

extern "C" {

void csm_options_init(csm_options* options) {
  if (options) *options = csm_options{0, 0, 0, 0, 0};
}

const char* csm_last_error(void) { return last_error.c_str(); }

csm_status csm_engine_create(const char* graph_text, const char* query_text,
                             const csm_options* options, csm_engine** out) {
  if (!graph_text || !query_text || !out) return fail(CSM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return make_engine(graph_text, query_text, options_or_default(options), out);
}

csm_status csm_engine_create_from_files(const char* graph_path, const char* query_path,
                                        const csm_options* options, csm_engine** out) {
  if (!graph_path || !query_path || !out) return fail(CSM_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  std::string graph_text, query_text;
  auto status = guarded([&] {
    graph_text = read_file(graph_path);
    query_text = read_file(query_path);
  });
  if (status != CSM_OK) return status;
  return make_engine(graph_text, query_text, options_or_default(options), out);
}

void csm_engine_destroy(csm_engine* engine) { delete engine; }

csm_status csm_engine_apply(csm_engine* engine, const char* op_line, csm_match_fn on_match,
                            void* user, csm_op_result* result) {
  if (!engine || !op_line) return fail(CSM_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    const auto index = engine->ops + 1;
    auto op = csm::parse_update_line(op_line, index);
    if (!op) throw csm::ParseError(index, "empty op line");
    auto& e = *engine->engine;
    csm::MatchSink sink;
    std::vector<std::uint64_t> qids, dids;
    if (on_match) {
      sink = [&](std::span<const csm::VertexId> m) {
        qids.resize(m.size());
        dids.resize(m.size());
        for (csm::VertexId u = 0; u < m.size(); ++u) {
          qids[u] = e.plan().query.external_id(u);
          dids[u] = e.graph().external_id(m[u]);
        }
        on_match(user, qids.data(), dids.data(), m.size());
      };
    }
    auto r = e.apply(*op, index, sink);
    ++engine->ops;
    if (result) {
      result->positive = r.positive ? 1 : 0;
      result->matches = r.matches;
      result->updated_vertices = r.update.updated_vertices;
      result->visited_edges = r.update.visited_edges;
      result->changed_edges = r.update.changed_edges;
      result->extensions = r.match.extensions;
    }
  });
}

csm_status csm_engine_size(const csm_engine* engine, size_t* vertices, size_t* edges) {
  if (!engine) return fail(CSM_ERR_ARGUMENT, "null engine");
  if (vertices) *vertices = engine->engine->graph().vertex_count();
  if (edges) *edges = engine->engine->graph().edge_count();
  return CSM_OK;
}

csm_status csm_engine_dump_dag(const csm_engine* engine, char* buffer, size_t capacity,
                               size_t* needed) {
  if (!engine) return fail(CSM_ERR_ARGUMENT, "null engine");
  return guarded([&] {
    const auto& plan = engine->engine->plan();
    const auto& q = plan.query;
    std::ostringstream text;
    text << "root u" << q.external_id(plan.dag.root) << '\n';
    for (auto u : plan.dag.topo_order) {
      for (auto c : plan.dag.children[u]) {
        text << 'u' << q.external_id(u) << " u" << q.external_id(c) << '\n';
      }
    }
    const auto s = text.str();
    if (needed) *needed = s.size() + 1;
    if (buffer && capacity > 0) {
      auto n = std::min(capacity - 1, s.size());
      s.copy(buffer, n);
      buffer[n] = '\0';
    }
  });
}

void csm_run_config_init(csm_run_config* config) {
  if (!config) return;
  *config = csm_run_config{};
  csm_options_init(&config->options);
}

csm_status csm_run(const csm_run_config* config, csm_run_summary* summary) {
  return run_with_report(config, summary, [](const csm::RunConfig& c, std::ostream* out) {
    return csm::run_continuous_matching(c, out);
  });
}

csm_status csm_oracle_run(const csm_run_config* config, csm_run_summary* summary) {
  return run_with_report(config, summary, [](const csm::RunConfig& c, std::ostream* out) {
    return csm::run_oracle(c, out);
  });
}

void csm_workload_params_init(csm_workload_params* params) {
  if (!params) return;
  csm::WorkloadParams d;
  *params = csm_workload_params{d.seed,          d.vertices,    d.labels,
                                d.edges,         d.ops,         d.deletion_rate,
                                d.query_edges,   d.edge_labels, d.directed ? 1 : 0};
}

csm_status csm_generate_workload(const csm_workload_params* params, const char* graph_path,
                                 const char* stream_path, const char* query_path) {
  if (!params || !graph_path || !stream_path || !query_path) {
    return fail(CSM_ERR_ARGUMENT, "null argument");
  }
  return guarded([&] {
    csm::WorkloadParams p;
    p.seed = params->seed;
    p.vertices = params->vertices;
    p.labels = params->labels;
    p.edges = params->edges;
    p.ops = params->ops;
    p.deletion_rate = params->deletion_rate;
    p.query_edges = params->query_edges;
    p.edge_labels = params->edge_labels;
    p.directed = params->directed != 0;
    auto w = csm::generate_workload(p);
    write_file(graph_path, w.graph);
    write_file(stream_path, w.stream);
    write_file(query_path, w.query);
  });
}

}  // extern "C"
