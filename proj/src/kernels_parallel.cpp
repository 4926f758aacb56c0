#include <omp.h>

#include <cstdint>

#include "slam/kernels.hpp"

namespace slam::kernels::parallel {

NeighborTable knn(std::span<const Point2> pts, std::size_t k) {
  NeighborTable t{pts.size(), k, std::vector<std::size_t>(pts.size() * k)};
  const auto n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    knn_row(pts, u, k, t.idx.data() + u * k);
  }
  return t;
}

std::vector<double> sliced_w2_matrix(const SortedProjections& p) {
  std::vector<double> out(p.S * p.S, 0.0);
  // Flatten the upper triangle so the work splits evenly.
  const auto S = static_cast<std::int64_t>(p.S);
  const std::int64_t pairs = S * (S - 1) / 2;
#pragma omp parallel for schedule(static)
  for (std::int64_t q = 0; q < pairs; ++q) {
    std::int64_t s = 0;
    std::int64_t rem = q;
    while (rem >= S - 1 - s) {
      rem -= S - 1 - s;
      ++s;
    }
    const auto a = static_cast<std::size_t>(s);
    const auto b = static_cast<std::size_t>(s + 1 + rem);
    const double v = sliced_w2_pair(p, a, b);
    out[a * p.S + b] = v;
    out[b * p.S + a] = v;
  }
  return out;
}

std::vector<double> cluster_distance_sums(std::span<const Point2> pts, std::span<const int> codes, std::size_t C) {
  std::vector<double> out(pts.size() * C, 0.0);
  const auto n = static_cast<std::int64_t>(pts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    distance_sums_row(pts, codes, C, u, out.data() + u * C);
  }
  return out;
}

}  // namespace slam::kernels::parallel
