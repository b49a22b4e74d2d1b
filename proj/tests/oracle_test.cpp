#include <doctest.h>

#include "csm/oracle.hpp"
#include "support.hpp"

using namespace csm;

TEST_CASE("triangle in a triangle has six embeddings") {
  auto in = test::load_texts("v 0 A\nv 1 A\nv 2 A\ne 0 1\ne 1 2\ne 0 2\n",
                             "v 0 A\nv 1 A\nv 2 A\ne 0 1\ne 1 2\ne 0 2\n", "");
  CHECK(enumerate_embeddings(in.query, in.graph, MatchSemantics::Isomorphism).size() == 6);
}

TEST_CASE("homomorphisms may reuse data vertices") {
  auto in = test::load_texts("v 0 A\nv 1 B\ne 0 1\n", "v 0 A\nv 1 B\nv 2 A\ne 0 1\ne 1 2\n", "");
  CHECK(enumerate_embeddings(in.query, in.graph, MatchSemantics::Isomorphism).empty());
  auto hom = enumerate_embeddings(in.query, in.graph, MatchSemantics::Homomorphism);
  REQUIRE(hom.size() == 1);
  CHECK(*hom.begin() == Embedding{0, 1, 0});
}

TEST_CASE("missing label gives no embeddings") {
  auto in = test::load_texts("v 0 A\nv 1 A\ne 0 1\n", "v 0 A\nv 1 B\ne 0 1\n", "");
  CHECK(enumerate_embeddings(in.query, in.graph, MatchSemantics::Isomorphism).empty());
}

TEST_CASE("running example g0 has no embeddings") {
  auto in = test::running_example();
  OracleLimits wide{8, 200};
  CHECK(enumerate_embeddings(in.query, in.graph, MatchSemantics::Isomorphism, wide).empty());
  CHECK_THROWS_AS(enumerate_embeddings(in.query, in.graph, MatchSemantics::Isomorphism), LimitError);
}

TEST_CASE("running example deltas") {
  auto in = test::running_example();
  OracleLimits wide{8, 200};
  auto mode = MatchSemantics::Isomorphism;
  auto first = delta_matches(in.query, in.graph, {*in.graph.find(4), *in.graph.find(7)}, mode, wide);
  CHECK(first.positive.empty());
  in.graph.add_edge(*in.graph.find(4), *in.graph.find(7), kUnlabeledEdge);
  auto second = delta_matches(in.query, in.graph, {*in.graph.find(3), *in.graph.find(6)}, mode, wide);
  CHECK(second.positive.size() == 200);
  CHECK(second.negative.empty());
}

TEST_CASE("completing a path yields one positive match") {
  auto in = test::load_texts("v 0 A\nv 1 B\nv 2 C\ne 0 1\n", "v 0 A\nv 1 B\nv 2 C\ne 0 1\ne 1 2\n", "");
  auto d = delta_matches(in.query, in.graph, {1, 2}, MatchSemantics::Isomorphism);
  CHECK(d.positive.size() == 1);
  CHECK(d.negative.empty());
}

TEST_CASE("insert and delete of the same edge are symmetric") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto trial = test::random_trial(seed);
    auto& in = trial.instance;
    for (std::size_t i = 0; i < in.stream.size(); ++i) {
      auto change = *test::edge_change(in.graph, in.stream[i], in.vocab, i + 1);
      if (!change.insert) {
        in.graph.remove_edge(change.src, change.dst);
        continue;
      }
      for (auto mode : {MatchSemantics::Isomorphism, MatchSemantics::Homomorphism}) {
        auto plus = delta_matches(in.query, in.graph, change, mode);
        DataGraph after = in.graph;
        after.add_edge(change.src, change.dst, change.label);
        auto reverse = change;
        reverse.insert = false;
        auto minus = delta_matches(in.query, after, reverse, mode);
        CHECK(plus.positive == minus.negative);
        // Negative count of a deletion is the number of before-embeddings using the edge.
        std::size_t using_edge = 0;
        for (const auto& m : plus.after) {
          using_edge += embedding_uses_edge(in.query, after, m, change.src, change.dst, change.label);
        }
        CHECK(minus.negative.size() == using_edge);
      }
      in.graph.add_edge(change.src, change.dst, change.label);
    }
  }
}

TEST_CASE("size guards") {
  auto in = test::load_texts("v 0 A\nv 1 A\n", "v 0 A\nv 1 A\ne 0 1\n", "");
  CHECK_THROWS_AS(enumerate_embeddings(in.query, in.graph, MatchSemantics::Isomorphism, {1, 64}),
                  LimitError);
  CHECK_THROWS_AS(enumerate_embeddings(in.query, in.graph, MatchSemantics::Isomorphism, {8, 1}),
                  LimitError);
}
