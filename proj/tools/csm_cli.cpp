#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "csm/csm.h"

namespace {

struct RunArgs {
  std::string graph, stream, query, report;
  std::string mode = "iso";
  std::string output = "count";
  std::string order = "estimated";
  std::string isolation = "iso";
  bool edge_labels = false;
  bool directed = false;
  bool stats = false;
  double time_limit = 0;
};

void add_input_options(CLI::App* cmd, RunArgs& a) {
  cmd->add_option("--graph", a.graph, "initial data graph")->required()->check(CLI::ExistingFile);
  cmd->add_option("--query", a.query, "query graph")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--edge-labels", a.edge_labels, "edges carry labels");
  cmd->add_flag("--directed", a.directed, "edges are directed");
}

void add_run_options(CLI::App* cmd, RunArgs& a) {
  add_input_options(cmd, a);
  cmd->add_option("--stream", a.stream, "update stream")->required()->check(CLI::ExistingFile);
  cmd->add_option("--mode", a.mode, "iso or hom")->check(CLI::IsMember({"iso", "hom"}));
  cmd->add_option("--output", a.output, "count or enum")->check(CLI::IsMember({"count", "enum"}));
  cmd->add_option("--report", a.report, "write the report here instead of stdout");
}

csm_run_config to_config(const RunArgs& a) {
  csm_run_config c;
  csm_run_config_init(&c);
  c.graph_path = a.graph.c_str();
  c.stream_path = a.stream.c_str();
  c.query_path = a.query.c_str();
  c.report_path = a.report.c_str();
  c.options.homomorphism = a.mode == "hom";
  c.options.exact_order = a.order == "exact";
  c.options.leaf_only = a.isolation == "leaf";
  c.options.edge_labels = a.edge_labels;
  c.options.directed = a.directed;
  c.enumerate = a.output == "enum";
  c.stats = a.stats;
  c.time_limit_seconds = a.time_limit;
  return c;
}

int report_failure(csm_status status) {
  std::cerr << "error: " << csm_last_error() << '\n';
  return static_cast<int>(status) + 2;  // 1 and 2 belong to usage errors
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous subgraph matching over an edge update stream"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "report matches for every op in a stream");
  add_run_options(run_cmd, run);
  run_cmd->add_option("--order", run.order, "estimated or exact candidate sizes")
      ->check(CLI::IsMember({"estimated", "exact"}));
  run_cmd->add_option("--isolation", run.isolation, "iso (isolated vertices) or leaf")
      ->check(CLI::IsMember({"iso", "leaf"}));
  run_cmd->add_flag("--stats", run.stats, "append per-op update counters and timings");
  run_cmd->add_option("--time-limit", run.time_limit, "seconds, checked between ops (0 = none)")
      ->check(CLI::NonNegativeNumber);

  RunArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference run");
  add_run_options(oracle_cmd, oracle);
  oracle_cmd->group("");  // hidden

  csm_workload_params gen;
  csm_workload_params_init(&gen);
  std::string out_prefix = "workload";
  auto* gen_cmd = app.add_subcommand("gen", "write a random graph, query and stream");
  gen_cmd->add_option("--seed", gen.seed, "RNG seed")->capture_default_str();
  gen_cmd->add_option("--vertices", gen.vertices)->capture_default_str();
  gen_cmd->add_option("--labels", gen.labels, "vertex label count")->capture_default_str();
  gen_cmd->add_option("--edges", gen.edges, "initial edge count")->capture_default_str();
  gen_cmd->add_option("--ops", gen.ops, "stream length")->capture_default_str();
  gen_cmd->add_option("--deletion-rate", gen.deletion_rate, "deletions per 100 insertions")
      ->capture_default_str();
  gen_cmd->add_option("--query-edges", gen.query_edges)->capture_default_str();
  gen_cmd->add_option("--edge-labels", gen.edge_labels, "edge label count (0 = unlabeled)")
      ->capture_default_str();
  bool gen_directed = false;
  gen_cmd->add_flag("--directed", gen_directed);
  gen_cmd->add_option("--out", out_prefix, "writes <out>.graph, <out>.stream, <out>.query")
      ->capture_default_str();

  RunArgs dag;
  auto* dag_cmd = app.add_subcommand("dag", "print the query DAG as an edge list");
  dag_cmd->add_option("--query", dag.query, "query graph")->required()->check(CLI::ExistingFile);
  dag_cmd->add_flag("--edge-labels", dag.edge_labels, "edges carry labels");
  dag_cmd->add_flag("--directed", dag.directed, "edges are directed");

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd || *oracle_cmd) {
    const auto& args = *run_cmd ? run : oracle;
    auto config = to_config(args);
    csm_run_summary summary{};
    auto status = *run_cmd ? csm_run(&config, &summary) : csm_oracle_run(&config, &summary);
    if (status != CSM_OK) return report_failure(status);
    return 0;
  }
  if (*gen_cmd) {
    gen.directed = gen_directed;
    auto g = out_prefix + ".graph", s = out_prefix + ".stream", q = out_prefix + ".query";
    auto status = csm_generate_workload(&gen, g.c_str(), s.c_str(), q.c_str());
    if (status != CSM_OK) return report_failure(status);
    return 0;
  }
  if (*dag_cmd) {
    csm_options options;
    csm_options_init(&options);
    options.edge_labels = dag.edge_labels;
    options.directed = dag.directed;
    std::ifstream in(dag.query);
    std::ostringstream query_text;
    query_text << in.rdbuf();
    csm_engine* engine = nullptr;
    auto status = csm_engine_create("", query_text.str().c_str(), &options, &engine);
    if (status != CSM_OK) return report_failure(status);
    std::size_t needed = 0;
    csm_engine_dump_dag(engine, nullptr, 0, &needed);
    std::string text(needed, '\0');
    status = csm_engine_dump_dag(engine, text.data(), text.size(), &needed);
    csm_engine_destroy(engine);
    if (status != CSM_OK) return report_failure(status);
    std::cout << text.c_str();
    return 0;
  }
  return 0;
}
