#include <algorithm>
#include <cmath>
#include <utility>

#include "slam/kernels.hpp"
#include "slam/numeric.hpp"

namespace slam::kernels {

void knn_row(std::span<const Point2> pts, std::size_t i, std::size_t k, std::size_t* out) {
  const std::size_t n = pts.size();
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) cand.emplace_back(squared_distance(pts[i], pts[j]), j);
  }
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  for (std::size_t r = 0; r < k; ++r) out[r] = cand[r].second;
}

double sliced_w2_pair(const SortedProjections& p, std::size_t s, std::size_t t) {
  double total = 0.0;
  for (std::size_t l = 0; l < p.L; ++l) {
    const double* a = p.values.data() + (s * p.L + l) * p.m;
    const double* b = p.values.data() + (t * p.L + l) * p.m;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.m; ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    total += acc / static_cast<double>(p.m);
  }
  return total / static_cast<double>(p.L);
}

void distance_sums_row(std::span<const Point2> pts, std::span<const int> codes, std::size_t C, std::size_t i,
                       double* out) {
  std::vector<ExactAccumulator> acc(C);
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (j == i) continue;
    acc[static_cast<std::size_t>(codes[j])].add(std::sqrt(squared_distance(pts[i], pts[j])));
  }
  for (std::size_t c = 0; c < C; ++c) out[c] = acc[c].value();
}

namespace serial {

NeighborTable knn(std::span<const Point2> pts, std::size_t k) {
  NeighborTable t{pts.size(), k, std::vector<std::size_t>(pts.size() * k)};
  for (std::size_t i = 0; i < pts.size(); ++i) knn_row(pts, i, k, t.idx.data() + i * k);
  return t;
}

std::vector<double> sliced_w2_matrix(const SortedProjections& p) {
  std::vector<double> out(p.S * p.S, 0.0);
  for (std::size_t s = 0; s < p.S; ++s) {
    for (std::size_t t = s + 1; t < p.S; ++t) {
      const double v = sliced_w2_pair(p, s, t);
      out[s * p.S + t] = v;
      out[t * p.S + s] = v;
    }
  }
  return out;
}

std::vector<double> cluster_distance_sums(std::span<const Point2> pts, std::span<const int> codes, std::size_t C) {
  std::vector<double> out(pts.size() * C, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) distance_sums_row(pts, codes, C, i, out.data() + i * C);
  return out;
}

}  // namespace serial
}  // namespace slam::kernels
