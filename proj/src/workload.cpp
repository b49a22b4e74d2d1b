#include "csm/workload.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "csm/graph.hpp"

namespace csm {

namespace {

using Edge = std::pair<std::uint32_t, std::uint32_t>;

class EdgePool {
 public:
  EdgePool(std::uint32_t n, bool directed) : n_(n), directed_(directed) {}

  std::uint64_t capacity() const {
    std::uint64_t pairs = std::uint64_t{n_} * (n_ - (n_ > 0 ? 1 : 0));
    return directed_ ? pairs : pairs / 2;
  }
  std::size_t size() const { return edges_.size(); }
  bool full() const { return edges_.size() >= capacity(); }
  bool directed() const { return directed_; }

  Edge key(std::uint32_t a, std::uint32_t b) const {
    if (!directed_ && a > b) std::swap(a, b);
    return {a, b};
  }
  bool contains(std::uint32_t a, std::uint32_t b) const { return edges_.contains(key(a, b)); }

  Edge random_absent(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::uint32_t> pick(0, n_ - 1);
    while (true) {
      auto a = pick(rng);
      auto b = pick(rng);
      if (a != b && !contains(a, b)) return {a, b};
    }
  }
  Edge random_present(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, edges_.size() - 1);
    return std::next(edges_.begin(), static_cast<std::ptrdiff_t>(pick(rng)))->first;
  }

  void add(Edge e, std::uint32_t label) { edges_.emplace(key(e.first, e.second), label); }
  std::uint32_t remove(Edge e) {
    auto it = edges_.find(key(e.first, e.second));
    auto label = it->second;
    edges_.erase(it);
    return label;
  }
  const std::map<Edge, std::uint32_t>& edges() const { return edges_; }

 private:
  std::uint32_t n_;
  bool directed_;
  std::map<Edge, std::uint32_t> edges_;
};

struct Walked {
  std::vector<std::uint32_t> vertices;  // data vertices in first-visit order
  std::vector<std::pair<Edge, std::uint32_t>> edges;
};

// Random walk collecting `want` distinct edges, ignoring direction while
// moving but keeping it in the output.
bool random_walk(const EdgePool& pool, std::uint32_t n, std::uint32_t want,
                 std::mt19937_64& rng, Walked& out) {
  std::vector<std::vector<std::pair<std::uint32_t, Edge>>> adj(n);
  for (const auto& [e, label] : pool.edges()) {
    adj[e.first].push_back({e.second, e});
    adj[e.second].push_back({e.first, e});
  }
  std::vector<std::uint32_t> starts;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (!adj[v].empty()) starts.push_back(v);
  }
  if (starts.empty()) return false;
  for (int attempt = 0; attempt < 64; ++attempt) {
    out = {};
    std::set<Edge> taken;
    auto cur = starts[std::uniform_int_distribution<std::size_t>(0, starts.size() - 1)(rng)];
    out.vertices.push_back(cur);
    for (std::uint32_t step = 0; step < 200 * want && out.edges.size() < want; ++step) {
      const auto& options = adj[cur];
      auto [next, e] = options[std::uniform_int_distribution<std::size_t>(0, options.size() - 1)(rng)];
      // A directed query may not hold both a->b and b->a.
      bool antiparallel = pool.directed() && taken.contains({e.second, e.first});
      if (!antiparallel && taken.insert(e).second) {
        out.edges.push_back({e, pool.edges().at(e)});
        if (std::find(out.vertices.begin(), out.vertices.end(), next) == out.vertices.end()) {
          out.vertices.push_back(next);
        }
      }
      cur = next;
    }
    if (out.edges.size() == want) return true;
  }
  return false;
}

}  // namespace

Workload generate_workload(const WorkloadParams& p) {
  if (p.vertices < 2) throw Error("workload: need at least two vertices");
  if (p.labels == 0) throw Error("workload: need at least one vertex label");
  if (p.query_edges == 0) throw Error("workload: query needs at least one edge");
  if (p.deletion_rate < 0) throw Error("workload: negative deletion rate");
  EdgePool pool(p.vertices, p.directed);
  if (p.edges > pool.capacity()) throw Error("workload: more edges than vertex pairs");

  std::mt19937_64 rng(p.seed);
  auto pick_label = [&](std::uint32_t count) {
    return std::uniform_int_distribution<std::uint32_t>(0, count - 1)(rng);
  };
  std::vector<std::uint32_t> labels(p.vertices);
  for (auto& l : labels) l = pick_label(p.labels);
  auto edge_label = [&]() { return p.edge_labels == 0 ? 0u : pick_label(p.edge_labels); };

  for (std::uint32_t i = 0; i < p.edges; ++i) pool.add(pool.random_absent(rng), edge_label());

  auto write_edge = [&](std::ostream& out, Edge e, std::uint32_t label) {
    out << e.first << ' ' << e.second;
    if (p.edge_labels != 0) out << " e" << label;
    out << '\n';
  };

  Workload w;
  {
    std::ostringstream out;
    for (std::uint32_t v = 0; v < p.vertices; ++v) out << "v " << v << " L" << labels[v] << '\n';
    for (const auto& [e, label] : pool.edges()) {
      out << "e ";
      write_edge(out, e, label);
    }
    w.graph = out.str();
  }
  {
    Walked walk;
    if (!random_walk(pool, p.vertices, p.query_edges, rng, walk)) {
      throw Error("workload: no connected region with " + std::to_string(p.query_edges) +
                  " edges for the query walk");
    }
    std::ostringstream out;
    std::map<std::uint32_t, std::uint32_t> local;
    for (auto v : walk.vertices) {
      auto id = static_cast<std::uint32_t>(local.size());
      local[v] = id;
      out << "v " << id << " L" << labels[v] << '\n';
    }
    for (const auto& [e, label] : walk.edges) {
      out << "e ";
      write_edge(out, {local[e.first], local[e.second]}, label);
    }
    w.query = out.str();
  }
  {
    std::ostringstream out;
    double owed = 0;  // deletions earned by past insertions
    for (std::uint32_t i = 0; i < p.ops; ++i) {
      bool remove = pool.size() > 0 && (owed >= 1 - 1e-9 || pool.full());
      if (remove) {
        auto e = pool.random_present(rng);
        pool.remove(e);
        out << "- " << e.first << ' ' << e.second << '\n';
        owed = std::max(0.0, owed - 1);
      } else {
        auto e = pool.random_absent(rng);
        auto label = edge_label();
        pool.add(e, label);
        out << "+ ";
        write_edge(out, e, label);
        owed += p.deletion_rate / 100.0;
      }
    }
    w.stream = out.str();
  }
  return w;
}

}  // namespace csm
