#include "slam/attributes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "slam/io.hpp"
#include "slam/numeric.hpp"

namespace slam {

double similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw AttributeError("similarity of vectors with different dimensions");
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

std::vector<int> type_edges(const SpatialGraph& graph, const Labeling& labels) {
  if (labels.size() != graph.n_nodes()) throw AttributeError("labeling does not match graph size");
  const int K = static_cast<int>(labels.num_labels());
  std::vector<int> types;
  types.reserve(graph.num_edges());
  for (const auto& e : graph.edges()) {
    const int a = labels.codes()[e.u];
    const int b = labels.codes()[e.v];
    if (a < 1 || a > K || b < 1 || b > K) throw AttributeError("label code outside 1..K");
    types.push_back(a == b ? a : 0);
  }
  return types;
}

std::vector<double> severity_weights(const SpatialGraph& graph, std::span<const int> truth_types,
                                     const std::optional<AttributeMatrix>& attributes, SimilarityMode mode) {
  if (truth_types.size() != graph.num_edges()) throw AttributeError("truth edge types misaligned with graph");
  std::vector<double> w(graph.num_edges(), 1.0);
  if (mode == SimilarityMode::ConstantOne) return w;
  if (!attributes) throw AttributeError("cosine similarity requires per-spot attributes");
  for (std::size_t r = 0; r < w.size(); ++r) {
    const auto& e = graph.edges()[r];
    const double s = similarity(attributes->row(e.u), attributes->row(e.v));
    w[r] = truth_types[r] == 0 ? 1.0 - s : s;
  }
  return w;
}

EdgeAttributeMatrix edge_attribute_matrix(std::span<const int> types, std::span<const double> weights, std::size_t K,
                                          ZeroRows zero_rows) {
  if (types.size() != weights.size()) throw AttributeError("edge types and weights differ in length");
  EdgeAttributeMatrix z;
  z.cols = K;
  for (std::size_t r = 0; r < types.size(); ++r) {
    if (types[r] == 0 && zero_rows == ZeroRows::Drop) continue;
    const std::size_t base = z.values.size();
    z.values.resize(base + K, 0.0);
    if (types[r] > 0) {
      if (static_cast<std::size_t>(types[r]) > K) throw AttributeError("edge type exceeds K");
      z.values[base + static_cast<std::size_t>(types[r]) - 1] = weights[r];
    }
    ++z.rows;
  }
  return z;
}

void write_z_csv(std::ostream& out, const EdgeAttributeMatrix& z) {
  for (std::size_t k = 0; k < z.cols; ++k) out << (k ? "," : "") << 'z' << (k + 1);
  out << '\n';
  for (std::size_t r = 0; r < z.rows; ++r) {
    for (std::size_t k = 0; k < z.cols; ++k) out << (k ? "," : "") << format_double(z.values[r * z.cols + k]);
    out << '\n';
  }
}

std::vector<EmpiricalDistribution> kde_sample(const EdgeAttributeMatrix& z, double h, std::size_t batch_size,
                                              std::size_t num_samples, std::uint64_t seed) {
  if (z.rows == 0 || z.cols == 0) throw AttributeError("edge attribute matrix is empty");
  if (!(h > 0.0)) throw AttributeError("bandwidth must be positive");
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, z.rows - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<EmpiricalDistribution> out(num_samples);
  for (auto& d : out) {
    d.m = batch_size;
    d.dim = z.cols;
    d.points.resize(batch_size * z.cols);
    for (std::size_t i = 0; i < batch_size; ++i) {
      const auto row = z.row(pick(rng));
      for (std::size_t k = 0; k < z.cols; ++k) d.points[i * z.cols + k] = row[k] + h * gauss(rng);
    }
  }
  return out;
}

}  // namespace slam
