#pragma once

// Data-parallel hot loops. Every routine has a plain serial reference and an
// OpenMP version; both produce bitwise identical output because each output
// cell is computed by the same sequential code, only the outer loop is split.

#include <cstddef>
#include <span>
#include <vector>

#include "slam/core.hpp"

namespace slam::kernels {

// Row-major table of k neighbor indices per point, nearest first. Ties in
// squared distance go to the smaller index.
struct NeighborTable {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<std::size_t> idx;

  std::span<const std::size_t> row(std::size_t i) const { return {idx.data() + i * k, k}; }
};

// Sorted projections of S empirical distributions onto L directions, each
// with m points: values[(s * L + l) * m + i].
struct SortedProjections {
  std::size_t S = 0;
  std::size_t L = 0;
  std::size_t m = 0;
  std::vector<double> values;
};

namespace serial {
NeighborTable knn(std::span<const Point2> pts, std::size_t k);
// S x S matrix of squared sliced W2, symmetric with zero diagonal.
std::vector<double> sliced_w2_matrix(const SortedProjections& p);
// n x C matrix: exact sum of distances from point i to the members of cluster c.
// `codes` are 0-based cluster ids.
std::vector<double> cluster_distance_sums(std::span<const Point2> pts, std::span<const int> codes, std::size_t C);
}  // namespace serial

namespace parallel {
NeighborTable knn(std::span<const Point2> pts, std::size_t k);
std::vector<double> sliced_w2_matrix(const SortedProjections& p);
std::vector<double> cluster_distance_sums(std::span<const Point2> pts, std::span<const int> codes, std::size_t C);
}  // namespace parallel

// Squared sliced W2 of one pair (s, t), the per-cell body shared by both paths.
double sliced_w2_pair(const SortedProjections& p, std::size_t s, std::size_t t);

// k nearest neighbours of point i, the per-row body shared by both paths.
void knn_row(std::span<const Point2> pts, std::size_t i, std::size_t k, std::size_t* out);

void distance_sums_row(std::span<const Point2> pts, std::span<const int> codes, std::size_t C, std::size_t i,
                       double* out);

}  // namespace slam::kernels
