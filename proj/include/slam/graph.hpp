#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "slam/core.hpp"

namespace slam {

class GraphError : public Error {
 public:
  using Error::Error;
};

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Mutual k-NN graph. Edges are sorted lexicographically; the edge index I(u,v)
// is the 1-based position in that order.
class SpatialGraph {
 public:
  SpatialGraph(std::size_t n_nodes, std::size_t k, std::vector<Edge> edges);

  std::size_t n_nodes() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  // I(u,v) in 1..|E|, symmetric in its arguments.
  std::optional<std::size_t> edge_index(std::size_t u, std::size_t v) const;
  std::vector<std::size_t> degrees() const;

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<Edge> edges_;
};

enum class Exec { Serial, Parallel };

// Per-node k nearest neighbours, nearest first, ties by node index.
std::vector<std::vector<std::size_t>> knn_lists(std::span<const Point2> coords, std::size_t k,
                                                Exec exec = Exec::Parallel);

SpatialGraph build_mutual_knn(std::span<const Point2> coords, std::size_t k, Exec exec = Exec::Parallel);

// `u,v,I` CSV with 0-based node indices.
void write_edges_csv(std::ostream& out, const SpatialGraph& g);

}  // namespace slam
