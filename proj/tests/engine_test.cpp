#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "csm/engine.hpp"
#include "support.hpp"

using namespace csm;

namespace {

std::string dir() { return std::string(CSM_TEST_DATA_DIR) + "/running_example/"; }

RunConfig running_config() {
  RunConfig c;
  c.graph_path = dir() + "graph";
  c.stream_path = dir() + "stream";
  c.query_path = dir() + "query";
  return c;
}

std::string strip_times(const std::string& report) {
  return std::regex_replace(report, std::regex("# time[^\n]*\n"), "");
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("csm_engine_test_" + name);
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("running example report") {
  std::ostringstream out;
  auto report = run_continuous_matching(running_config(), &out);
  CHECK(out.str() == "1 + 0\n2 + 200\n# total ops=2 positive=200 negative=0\n");
  REQUIRE(report.ops.size() == 2);
  CHECK(report.total_positive == 200);
  CHECK_FALSE(report.truncated);
  const auto& p = report.phases;
  CHECK(p.insert_update + p.insert_match + p.delete_update + p.delete_match <=
        report.elapsed_seconds + 1e-3);
}

TEST_CASE("enumeration lines use external ids") {
  auto config = running_config();
  config.enumerate = true;
  std::ostringstream out;
  run_continuous_matching(config, &out);
  auto text = out.str();
  CHECK(text.find("m u1:v1 u2:v3 u3:v4 u4:v6 u5:v7\n") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), 'm') == 200);
}

TEST_CASE("stats lines and deterministic replay") {
  auto config = running_config();
  config.stats = true;
  std::ostringstream a, b;
  run_continuous_matching(config, &a);
  run_continuous_matching(config, &b);
  CHECK(strip_times(a.str()) == strip_times(b.str()));
  CHECK(a.str().find("# stat 2 updated=") != std::string::npos);
  CHECK(a.str().find("# time preprocess=") != std::string::npos);
}

TEST_CASE("empty stream") {
  auto config = running_config();
  config.stream_path = temp_file("empty_stream", "").string();
  std::ostringstream out;
  auto report = run_continuous_matching(config, &out);
  CHECK(report.ops.empty());
  CHECK(out.str() == "# total ops=0 positive=0 negative=0\n");
}

TEST_CASE("errors surface with their kind") {
  auto config = running_config();
  config.graph_path = dir() + "missing";
  CHECK_THROWS_AS(run_continuous_matching(config), IoError);
  config = running_config();
  config.stream_path = temp_file("bad_stream", "+ 4 7\n+ 4 7\n").string();
  try {
    run_continuous_matching(config);
    FAIL("expected a stream error");
  } catch (const StreamError& e) {
    CHECK(e.op_index() == 2);
  }
  config.stream_path = temp_file("bad_syntax", "+ 4\n").string();
  CHECK_THROWS_AS(run_continuous_matching(config), ParseError);
  config = running_config();
  config.query_path = temp_file("split_query", "v 1 A\nv 2 B\n").string();
  CHECK_THROWS_AS(run_continuous_matching(config), QueryError);
}

TEST_CASE("time limit truncates between ops") {
  auto config = running_config();
  config.time_limit_seconds = 1e-12;
  std::string stream;
  for (int i = 0; i < 200; ++i) stream += i % 2 ? "- 4 7\n" : "+ 4 7\n";
  config.stream_path = temp_file("long_stream", stream).string();
  std::ostringstream out;
  auto report = run_continuous_matching(config, &out);
  CHECK(report.truncated);
  CHECK(report.ops.size() < 200);
  CHECK(out.str().ends_with("# truncated\n"));
}

TEST_CASE("vertex ops") {
  auto in = test::load_texts("v 0 A\nv 1 B\ne 0 1\n", "v 0 A\nv 1 B\nv 2 A\ne 0 1\ne 1 2\n", "");
  Engine engine(std::move(in.vocab), std::move(in.graph), std::move(in.query));
  auto r = engine.apply(*parse_update_line("v+ 5 A", 1), 1);
  CHECK(r.positive);
  CHECK(r.matches == 0);
  CHECK(engine.dcs() == Dcs::build(engine.plan(), engine.graph()));
  CHECK(engine.apply(*parse_update_line("+ 5 1", 2), 2).matches == 2);
  // Removing B drops both of its edges; each path uses both.
  r = engine.apply(*parse_update_line("v- 1", 3), 3);
  CHECK_FALSE(r.positive);
  CHECK(r.matches == 2);
  CHECK(r.update.changed_edges > 0);
  CHECK(engine.graph().vertex_count() == 2);
  CHECK(engine.dcs() == Dcs::build(engine.plan(), engine.graph()));
  CHECK_THROWS_AS(engine.apply(*parse_update_line("v- 1", 4), 4), StreamError);
  CHECK_THROWS_AS(engine.apply(*parse_update_line("v+ 0 A", 5), 5), StreamError);
}

TEST_CASE("engine rejects queries it cannot run") {
  auto in = test::load_texts("v 0 A\n", "v 0 A\n", "");
  CHECK_THROWS_AS(Engine(std::move(in.vocab), std::move(in.graph), std::move(in.query)), QueryError);
}

TEST_CASE("oracle run matches the engine on generated inputs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    WorkloadParams p;
    p.seed = seed;
    p.vertices = 12;
    p.labels = 3;
    p.edges = 20;
    p.ops = 30;
    p.deletion_rate = 30;
    p.query_edges = 4;
    auto w = generate_workload(p);
    RunConfig c;
    c.graph_path = temp_file("g", w.graph).string();
    c.stream_path = temp_file("s", w.stream).string();
    c.query_path = temp_file("q", w.query).string();
    auto engine = run_continuous_matching(c);
    auto oracle = run_oracle(c);
    REQUIRE(engine.ops.size() == oracle.ops.size());
    for (std::size_t i = 0; i < engine.ops.size(); ++i) {
      CHECK(engine.ops[i].matches == oracle.ops[i].matches);
      CHECK(engine.ops[i].positive == oracle.ops[i].positive);
    }
  }
}
