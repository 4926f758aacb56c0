#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "slam/core.hpp"
#include "slam/graph.hpp"

namespace slam {

class AttributeError : public Error {
 public:
  using Error::Error;
};

// Cosine similarity clamped to [0,1]; 0 when either vector is all zeros.
double similarity(std::span<const double> a, std::span<const double> b);

// Edge type t when both endpoints carry code t, else 0.
std::vector<int> type_edges(const SpatialGraph& graph, const Labeling& labels);

// Sim(x_u, x_v) on edges the truth keeps inside one label, 1 - Sim on edges
// that cross labels in the truth. ConstantOne gives all ones.
std::vector<double> severity_weights(const SpatialGraph& graph, std::span<const int> truth_types,
                                     const std::optional<AttributeMatrix>& attributes, SimilarityMode mode);

// One-hot weighted edge attributes, row-major |E| x K.
struct EdgeAttributeMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const { return {values.data() + r * cols, cols}; }
};

EdgeAttributeMatrix edge_attribute_matrix(std::span<const int> types, std::span<const double> weights, std::size_t K,
                                          ZeroRows zero_rows = ZeroRows::Keep);

void write_z_csv(std::ostream& out, const EdgeAttributeMatrix& z);

// A batch of m points in R^K, row-major.
struct EmpiricalDistribution {
  std::size_t m = 0;
  std::size_t dim = 0;
  std::vector<double> points;

  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }
};

// Draws from the Gaussian KDE over the rows of Z: pick a row uniformly, add
// h times a standard normal vector.
std::vector<EmpiricalDistribution> kde_sample(const EdgeAttributeMatrix& z, double h, std::size_t batch_size,
                                              std::size_t num_samples, std::uint64_t seed);

}  // namespace slam
