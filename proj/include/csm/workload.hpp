#pragma once

#include <cstdint>
#include <string>

namespace csm {

struct WorkloadParams {
  std::uint64_t seed = 1;
  std::uint32_t vertices = 10;
  std::uint32_t labels = 2;
  std::uint32_t edges = 15;
  std::uint32_t ops = 20;
  /// Deletions per 100 insertions.
  double deletion_rate = 10;
  std::uint32_t query_edges = 3;
  /// 0 disables edge labels.
  std::uint32_t edge_labels = 0;
  bool directed = false;
};

/// Text in the graph / stream formats the parsers accept.
struct Workload {
  std::string graph;
  std::string stream;
  std::string query;
};

/// Random data graph, a query cut from it by random walk, and an update
/// stream whose deletions pick uniformly among the current edges.
/// Deterministic in params. Throws Error on infeasible params.
Workload generate_workload(const WorkloadParams& params);

}  // namespace csm
