#include "slam/graph.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "slam/kernels.hpp"

namespace slam {

SpatialGraph::SpatialGraph(std::size_t n_nodes, std::size_t k, std::vector<Edge> edges)
    : n_(n_nodes), k_(k), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.u >= e.v || e.v >= n_) throw GraphError("edge must satisfy u < v < n");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) throw GraphError("duplicate edge");
}

std::optional<std::size_t> SpatialGraph::edge_index(std::size_t u, std::size_t v) const {
  if (u > v) std::swap(u, v);
  const Edge key{u, v};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return std::nullopt;
  return static_cast<std::size_t>(it - edges_.begin()) + 1;
}

std::vector<std::size_t> SpatialGraph::degrees() const {
  std::vector<std::size_t> d(n_, 0);
  for (const auto& e : edges_) {
    ++d[e.u];
    ++d[e.v];
  }
  return d;
}

namespace {

kernels::NeighborTable neighbor_table(std::span<const Point2> coords, std::size_t k, Exec exec) {
  if (coords.size() < 2) throw GraphError("graph needs at least 2 nodes");
  if (k == 0) throw GraphError("k must be positive");
  if (k >= coords.size()) {
    throw GraphError("k = " + std::to_string(k) + " must be smaller than the node count " +
                     std::to_string(coords.size()));
  }
  return exec == Exec::Serial ? kernels::serial::knn(coords, k) : kernels::parallel::knn(coords, k);
}

}  // namespace

std::vector<std::vector<std::size_t>> knn_lists(std::span<const Point2> coords, std::size_t k, Exec exec) {
  const auto t = neighbor_table(coords, k, exec);
  std::vector<std::vector<std::size_t>> out(t.n);
  for (std::size_t i = 0; i < t.n; ++i) out[i].assign(t.row(i).begin(), t.row(i).end());
  return out;
}

SpatialGraph build_mutual_knn(std::span<const Point2> coords, std::size_t k, Exec exec) {
  const auto t = neighbor_table(coords, k, exec);
  const auto contains = [&](std::size_t a, std::size_t b) {
    const auto r = t.row(a);
    return std::find(r.begin(), r.end(), b) != r.end();
  };
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < t.n; ++u) {
    for (std::size_t v : t.row(u)) {
      if (u < v && contains(v, u)) edges.push_back({u, v});
    }
  }
  return SpatialGraph(coords.size(), k, std::move(edges));
}

void write_edges_csv(std::ostream& out, const SpatialGraph& g) {
  out << "u,v,I\n";
  for (std::size_t i = 0; i < g.num_edges(); ++i) out << g.edges()[i].u << ',' << g.edges()[i].v << ',' << i + 1 << '\n';
}

}  // namespace slam
