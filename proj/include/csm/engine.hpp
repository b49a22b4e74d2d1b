#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "csm/dcs.hpp"
#include "csm/matcher.hpp"

namespace csm {

struct OpResult {
  bool positive = true;  // '+' for insertions, '-' for deletions
  std::uint64_t matches = 0;
  UpdateStats update;
  MatchStats match;
  double update_seconds = 0;
  double match_seconds = 0;
};

/// The per-op loop: changed edges, then graph/DCS update and matching in
/// the order that lets each phase see the right graph.
class Engine {
 public:
  Engine(Vocabulary vocab, DataGraph graph, QueryGraph query, MatcherOptions options = {});

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const Vocabulary& vocab() const noexcept { return vocab_; }
  const DataGraph& graph() const noexcept { return graph_; }
  const QueryPlan& plan() const noexcept { return *plan_; }
  const Dcs& dcs() const noexcept { return dcs_; }
  const MatcherOptions& options() const noexcept { return options_; }
  void set_options(const MatcherOptions& options) { options_ = options; }

  /// Applies one stream op; `op_index` is only used in error messages.
  /// Vertex deletion first deletes every incident edge and sums their
  /// negative matches. Throws StreamError on an inconsistent op, leaving
  /// the engine unchanged.
  OpResult apply(const UpdateOp& op, std::size_t op_index, const MatchSink& sink = {});

  OpResult insert_edge(VertexId src, VertexId dst, LabelId label, const MatchSink& sink = {});
  OpResult delete_edge(VertexId src, VertexId dst, const MatchSink& sink = {});

  /// Pairs whose flags flipped during the most recent edge update.
  const std::vector<CandidatePair>& last_touched() const noexcept { return touched_; }
  /// Record last_touched() on every update (off by default).
  void record_touched(bool on) { record_touched_ = on; }

 private:
  Vocabulary vocab_;
  DataGraph graph_;
  std::unique_ptr<QueryPlan> plan_;
  Dcs dcs_;
  MatcherOptions options_;
  bool record_touched_ = false;
  std::vector<CandidatePair> touched_;
};

struct RunConfig {
  std::string graph_path;
  std::string stream_path;
  std::string query_path;
  MatcherOptions matcher;
  bool enumerate = false;
  bool edge_labels = false;
  bool directed = false;
  bool stats = false;
  double time_limit_seconds = 0;  // 0 = none
};

struct OpLine {
  std::size_t index = 0;  // 1-based
  bool positive = true;
  std::uint64_t matches = 0;
  UpdateStats update;
};

struct PhaseTimes {
  double insert_update = 0;
  double insert_match = 0;
  double delete_update = 0;
  double delete_match = 0;
};

struct RunReport {
  std::vector<OpLine> ops;
  std::uint64_t total_positive = 0;
  std::uint64_t total_negative = 0;
  MatchStats match;
  PhaseTimes phases;
  double preprocess_seconds = 0;
  double elapsed_seconds = 0;  // per-op loop only
  bool truncated = false;
};

/// Loads the three files and runs every op. When `out` is non-null the
/// report lines are streamed to it as ops complete.
RunReport run_continuous_matching(const RunConfig& config, std::ostream* out = nullptr);

/// Same, on already-loaded inputs.
RunReport run_continuous_matching(Engine& engine, const std::vector<UpdateOp>& stream,
                                  const RunConfig& config, std::ostream* out = nullptr,
                                  double preprocess_seconds = 0);

/// Brute-force counterpart of run_continuous_matching: recomputes every
/// delta with the oracle. Matches within an op are listed in sorted order.
RunReport run_oracle(const RunConfig& config, std::ostream* out = nullptr,
                     const OracleLimits& limits = {});

/// `m u<id>:v<id> ...` in query-vertex order, external ids.
std::string format_match(const Engine& engine, std::span<const VertexId> mapping);

}  // namespace csm
