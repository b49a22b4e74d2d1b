#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "csm/graph.hpp"
#include "support.hpp"

using namespace csm;

TEST_CASE("labels intern bijectively") {
  LabelTable t;
  auto a = t.intern("A");
  auto b = t.intern("B");
  CHECK(a != b);
  CHECK(t.intern("A") == a);
  CHECK(t.name(b) == "B");
  CHECK(t.find("C") == std::nullopt);
  Vocabulary v;
  CHECK(v.edge_labels.find("") == kUnlabeledEdge);
}

TEST_CASE("smallest labeled graph parses") {
  Vocabulary vocab;
  auto g = parse_graph_text("v 0 A\nv 1 B\ne 0 1 x\n", vocab, {.edge_labels = true});
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);
  auto v0 = *g.find(0), v1 = *g.find(1);
  CHECK(g.has_edge(v1, v0, *vocab.edge_labels.find("x")));
  CHECK(g.neighbors_with_label(v0, g.label(v1)).size() == 1);
}

TEST_CASE("empty text is an empty graph") {
  Vocabulary vocab;
  auto g = parse_graph_text("", vocab, {});
  CHECK(g.vertex_count() == 0);
  CHECK(parse_update_stream_text("").empty());
}

TEST_CASE("comment lines and arbitrary ids") {
  Vocabulary vocab;
  auto g = parse_graph_text("# header\nv 1000000007 A\n\nv 3 A\ne 3 1000000007\n", vocab, {});
  REQUIRE(g.find(1000000007));
  CHECK(g.external_id(*g.find(3)) == 3);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("graph errors carry line numbers") {
  Vocabulary vocab;
  auto line_of = [&](const char* text, GraphOptions options = {}) -> std::size_t {
    try {
      parse_graph_text(text, vocab, options);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("v 0 A\nv 0 B\n") == 2);
  CHECK(line_of("v 0 A\ne 0 1\n") == 2);
  CHECK(line_of("v 0 A\nv 1 A\ne 0 1\ne 1 0\n") == 4);
  CHECK(line_of("v 0 A\ne 0 0\n") == 2);
  CHECK(line_of("v 0 A\nx 0\n") == 2);
  CHECK(line_of("v zero A\n") == 1);
  CHECK(line_of("v 0 A\nv 1 B\ne 0 1\n", {.edge_labels = true}) == 3);
}

TEST_CASE("directed graphs keep antiparallel edges apart") {
  Vocabulary vocab;
  auto g = parse_graph_text("v 0 A\nv 1 A\ne 0 1\ne 1 0\n", vocab, {.directed = true});
  auto a = *g.find(0), b = *g.find(1);
  CHECK(g.edge_count() == 2);
  CHECK(g.neighbors(a, Direction::Out).size() == 1);
  CHECK(g.neighbors(a, Direction::In).size() == 1);
  g.remove_edge(a, b);
  CHECK_FALSE(g.edge_label(a, b));
  CHECK(g.edge_label(b, a));
}

TEST_CASE("stream parsing") {
  auto ops = parse_update_stream_text("+ 4 7\n# c\n- 4 7\nv+ 99 A\nv- 99\n+ 1 2 x\n");
  REQUIRE(ops.size() == 5);
  CHECK(ops[0].kind == OpKind::EdgeInsert);
  CHECK(ops[0].first == 4);
  CHECK(ops[0].second == 7);
  CHECK(ops[1].kind == OpKind::EdgeDelete);
  CHECK(ops[2].kind == OpKind::VertexInsert);
  CHECK(ops[2].label == "A");
  CHECK(ops[3].kind == OpKind::VertexDelete);
  CHECK(ops[4].label == "x");
  CHECK(ops[4].line == 6);
  CHECK_THROWS_AS(parse_update_stream_text("+ 1\n"), ParseError);
  CHECK_THROWS_AS(parse_update_stream_text("* 1 2\n"), ParseError);
  CHECK_THROWS_AS(parse_update_stream_text("v+ 1\n"), ParseError);
}

TEST_CASE("apply_update validates against the graph") {
  Vocabulary vocab;
  DataGraph g;
  apply_update(g, *parse_update_line("v+ 99 A", 1), vocab, 1);
  CHECK(g.vertex_count() == 1);
  CHECK(g.edge_count() == 0);
  CHECK_THROWS_AS(apply_update(g, *parse_update_line("v+ 99 A", 2), vocab, 2), StreamError);
  apply_update(g, *parse_update_line("v+ 5 B", 3), vocab, 3);
  apply_update(g, *parse_update_line("+ 5 99", 4), vocab, 4);
  CHECK_THROWS_AS(apply_update(g, *parse_update_line("+ 99 5", 5), vocab, 5), StreamError);
  CHECK_THROWS_AS(apply_update(g, *parse_update_line("+ 99 6", 6), vocab, 6), StreamError);
  CHECK_THROWS_AS(apply_update(g, *parse_update_line("v- 5", 7), vocab, 7), StreamError);
  try {
    apply_update(g, *parse_update_line("- 5 6", 8), vocab, 8);
    FAIL("expected a stream error");
  } catch (const StreamError& e) {
    CHECK(e.op_index() == 8);
  }
  apply_update(g, *parse_update_line("- 5 99", 9), vocab, 9);
  apply_update(g, *parse_update_line("v- 5", 10), vocab, 10);
  CHECK(g.vertex_count() == 1);
  CHECK_FALSE(g.find(5));
}

TEST_CASE("running example graph: insertions then deletions restore g0") {
  auto in = test::running_example();
  CHECK(in.graph.vertex_count() == 106);
  const DataGraph g0 = in.graph;
  for (std::size_t i = 0; i < in.stream.size(); ++i) apply_update(in.graph, in.stream[i], in.vocab, i + 1);
  CHECK(in.graph.edge_count() == g0.edge_count() + 2);
  CHECK(in.graph.has_edge(*in.graph.find(6), *in.graph.find(3), kUnlabeledEdge));
  CHECK(in.graph.has_edge(*in.graph.find(4), *in.graph.find(7), kUnlabeledEdge));
  apply_update(in.graph, *parse_update_line("- 3 6", 1), in.vocab, 3);
  apply_update(in.graph, *parse_update_line("- 4 7", 1), in.vocab, 4);
  CHECK(in.graph == g0);
}

TEST_CASE("label index partitions adjacency under random updates") {
  std::mt19937_64 rng(5);
  Vocabulary vocab;
  DataGraph g;
  for (int v = 0; v < 12; ++v) g.add_vertex(v, vocab.vertex_labels.intern(std::string(1, char('A' + v % 3))));
  const DataGraph empty = g;
  std::vector<std::pair<VertexId, VertexId>> inserted;
  for (int step = 0; step < 300; ++step) {
    VertexId a = rng() % 12, b = rng() % 12;
    if (a == b) continue;
    if (g.edge_label(a, b)) {
      g.remove_edge(a, b);
    } else {
      g.add_edge(a, b, kUnlabeledEdge);
    }
    for (VertexId v = 0; v < 12; ++v) {
      std::size_t total = 0;
      for (LabelId l = 0; l < 3; ++l) {
        for (const auto& n : g.neighbors_with_label(v, l)) {
          CHECK(g.label(n.vertex) == l);
          CHECK(g.edge_label(v, n.vertex));
          ++total;
        }
      }
      CHECK(total == g.neighbors(v).size());
    }
  }
  for (VertexId a = 0; a < 12; ++a) {
    for (VertexId b = a + 1; b < 12; ++b) {
      if (g.edge_label(a, b)) g.remove_edge(a, b);
    }
  }
  CHECK(g == empty);
}

TEST_CASE("vertex removal swaps ranks") {
  Vocabulary vocab;
  auto g = parse_graph_text("v 1 A\nv 2 A\nv 3 A\n", vocab, {});
  auto last = *g.find(3);
  g.remove_vertex(*g.find(1));
  CHECK(g.label_rank(last) == 0);
  CHECK(g.vertices_with_label(g.label(last)).size() == 2);
}

TEST_CASE("write_graph round-trips") {
  Vocabulary vocab;
  auto g = parse_graph_text("v 4 A\nv 9 B\nv 2 A\ne 4 9 p\ne 2 9 q\n", vocab, {.edge_labels = true});
  std::ostringstream out;
  write_graph(out, g, vocab);
  Vocabulary vocab2;
  auto h = parse_graph_text(out.str(), vocab2, {.edge_labels = true});
  std::ostringstream again;
  write_graph(again, h, vocab2);
  CHECK(out.str() == again.str());
  CHECK(h.edge_count() == 2);
}

TEST_CASE("query graphs") {
  Vocabulary vocab;
  auto q = QueryGraph::from_graph(parse_graph_text("v 0 A\nv 1 B\nv 2 C\ne 0 1\ne 2 1\n", vocab, {}));
  CHECK(q.size() == 3);
  CHECK(q.connected());
  CHECK(q.degree(1) == 2);
  CHECK(q.neighbor_slot(1, 2) == 1);
  CHECK_FALSE(q.neighbor_slot(0, 2));
  auto split = QueryGraph::from_graph(parse_graph_text("v 0 A\nv 1 B\nv 2 C\ne 0 1\n", vocab, {}));
  CHECK_FALSE(split.connected());
  CHECK_THROWS_AS(QueryGraph::from_graph(parse_graph_text("v 0 A\nv 1 A\ne 0 1\ne 1 0\n", vocab,
                                                          {.directed = true})),
                  QueryError);
}
