#include "slam/discrepancy.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include "slam/numeric.hpp"

namespace slam {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_batches(std::span<const EmpiricalDistribution> dists) {
  if (dists.empty()) return;
  const auto m = dists.front().m;
  const auto dim = dists.front().dim;
  if (dim == 0) throw DiscrepancyError("distributions must have dimension K >= 1");
  for (const auto& d : dists) {
    if (d.m != m) throw DiscrepancyError("all batches must have the same number of points");
    if (d.dim != dim) throw DiscrepancyError("all batches must have the same dimension");
    if (d.points.size() != d.m * d.dim) throw DiscrepancyError("batch storage does not match its shape");
  }
}

}  // namespace

double wasserstein_1d_sq(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DiscrepancyError("1-D Wasserstein needs equal sample counts");
  if (a.empty()) throw DiscrepancyError("1-D Wasserstein needs at least one sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += (x[i] - y[i]) * (x[i] - y[i]);
  return acc / static_cast<double>(x.size());
}

std::size_t effective_projections(std::size_t K, std::size_t L) { return K == 1 ? 1 : L; }

std::vector<double> draw_directions(std::size_t K, std::size_t L, std::uint64_t seed) {
  if (K == 0) throw DiscrepancyError("projection dimension must be at least 1");
  if (L == 0) throw DiscrepancyError("number of projections must be positive");
  if (K == 1) return {1.0};
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> dirs(L * K);
  for (std::size_t l = 0; l < L; ++l) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double g = gauss(rng);
        dirs[l * K + k] = g;
        norm2 += g * g;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t k = 0; k < K; ++k) dirs[l * K + k] *= inv;
  }
  return dirs;
}

kernels::SortedProjections project_sorted(std::span<const EmpiricalDistribution> dists,
                                          std::span<const double> directions, std::size_t L) {
  check_batches(dists);
  kernels::SortedProjections p;
  p.S = dists.size();
  p.L = L;
  p.m = dists.empty() ? 0 : dists.front().m;
  const std::size_t K = dists.empty() ? 0 : dists.front().dim;
  if (directions.size() != L * K) throw DiscrepancyError("direction set does not match dimension");
  p.values.resize(p.S * p.L * p.m);
  for (std::size_t s = 0; s < p.S; ++s) {
    const auto& d = dists[s];
    for (std::size_t l = 0; l < L; ++l) {
      double* out = p.values.data() + (s * L + l) * p.m;
      const double* dir = directions.data() + l * K;
      for (std::size_t i = 0; i < p.m; ++i) {
        const double* x = d.points.data() + i * K;
        double v = 0.0;
        for (std::size_t k = 0; k < K; ++k) v += x[k] * dir[k];
        out[i] = v;
      }
      std::sort(out, out + p.m);
    }
  }
  return p;
}

std::vector<double> sliced_w2_matrix(std::span<const EmpiricalDistribution> dists, std::size_t num_projections,
                                     std::uint64_t seed, Exec exec) {
  check_batches(dists);
  if (dists.empty()) return {};
  const std::size_t K = dists.front().dim;
  const std::size_t L = effective_projections(K, num_projections);
  const auto dirs = draw_directions(K, num_projections, seed);
  const auto p = project_sorted(dists, dirs, L);
  return exec == Exec::Serial ? kernels::serial::sliced_w2_matrix(p) : kernels::parallel::sliced_w2_matrix(p);
}

double sliced_w2(const EmpiricalDistribution& p, const EmpiricalDistribution& q, std::size_t num_projections,
                 std::uint64_t seed) {
  const EmpiricalDistribution pair[2] = {p, q};
  return sliced_w2_matrix(pair, num_projections, seed, Exec::Serial)[1];
}

double sw_gaussian_kernel(const EmpiricalDistribution& p, const EmpiricalDistribution& q, double gamma,
                          std::size_t num_projections, std::uint64_t seed) {
  if (!(gamma > 0.0)) throw DiscrepancyError("gamma must be positive");
  return std::exp(-gamma * sliced_w2(p, q, num_projections, seed));
}

KernelGram sw_gram(std::span<const EmpiricalDistribution> dists, double gamma, std::size_t num_projections,
                   std::uint64_t seed, Exec exec) {
  if (!(gamma > 0.0)) throw DiscrepancyError("gamma must be positive");
  KernelGram g;
  g.size = dists.size();
  g.matrix = sliced_w2_matrix(dists, num_projections, seed, exec);
  for (double& v : g.matrix) v = std::exp(-gamma * v);
  return g;
}

double mmd_from_gram(const KernelGram& gram, std::size_t n0, MmdEstimator estimator) {
  if (n0 > gram.size) throw DiscrepancyError("split point beyond Gram size");
  const std::size_t n1 = gram.size - n0;
  if (n0 < 2 || n1 < 2) throw DiscrepancyError("each side needs at least 2 sampled distributions");
  const bool full = estimator == MmdEstimator::StandardBiased;
  // Exactly rounded block sums keep d invariant to argument order.
  const auto block = [&](std::size_t lo, std::size_t hi) {
    ExactAccumulator acc;
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = full ? lo : i + 1; j < hi; ++j) acc.add(gram.at(i, j));
    }
    return acc.value();
  };
  ExactAccumulator cross;
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = n0; j < gram.size; ++j) cross.add(gram.at(i, j));
  }
  const double a = block(0, n0) / static_cast<double>(n0 * n0);
  const double b = block(n0, gram.size) / static_cast<double>(n1 * n1);
  const double c = 2.0 * cross.value() / static_cast<double>(n0 * n1);
  return (a + b) - c;
}

double mmd_discrepancy(std::span<const EmpiricalDistribution> samples0, std::span<const EmpiricalDistribution> samples1,
                       double gamma, std::size_t num_projections, std::uint64_t seed, MmdEstimator estimator,
                       Exec exec) {
  if (samples0.size() < 2 || samples1.size() < 2) {
    throw DiscrepancyError("each side needs at least 2 sampled distributions");
  }
  std::vector<EmpiricalDistribution> all(samples0.begin(), samples0.end());
  all.insert(all.end(), samples1.begin(), samples1.end());
  return mmd_from_gram(sw_gram(all, gamma, num_projections, seed, exec), samples0.size(), estimator);
}

SlamEvaluator::SlamEvaluator(const SpatialDataset& dataset, const Labeling& truth, EvaluationConfig config, Exec exec)
    : dataset_(dataset),
      truth_(truth),
      config_(std::move(config)),
      exec_(exec),
      graph_(0, 0, {}) {
  try {
    config_.validate();
  } catch (const ConfigError& e) {
    throw SlamError("config", e.what());
  }
  if (truth_.size() != dataset_.size()) throw SlamError("input", "truth labeling does not cover the dataset");
  const auto t0 = Clock::now();
  try {
    graph_ = build_mutual_knn(dataset_.coords(), static_cast<std::size_t>(config_.k_neighbors), exec_);
  } catch (const Error& e) {
    throw SlamError("graph", e.what());
  }
  if (graph_.num_edges() == 0) throw SlamError("graph", "mutual k-NN graph has no edges");
  try {
    const auto truth_types = type_edges(graph_, truth_);
    weights_ = severity_weights(graph_, truth_types, dataset_.attributes(), config_.resolved_similarity(dataset_));
  } catch (const Error& e) {
    throw SlamError("attributes", e.what());
  }
  graph_seconds_ = seconds_since(t0);
}

EdgeAttributeMatrix SlamEvaluator::edge_matrix(const Labeling& labels) const {
  const auto types = type_edges(graph_, labels);
  return edge_attribute_matrix(types, weights_, labels.num_labels(), config_.zero_rows);
}

SlamResult SlamEvaluator::score(const Labeling& predicted) const {
  if (predicted.size() != dataset_.size()) throw SlamError("input", "predicted labeling does not cover the dataset");
  SlamResult r;
  r.seed = config_.rng_seed;
  r.num_edges = graph_.num_edges();

  auto t0 = Clock::now();
  Labeling pred = predicted;
  const bool need_match = config_.match == MatchPolicy::Always ||
                          (config_.match == MatchPolicy::Auto && !shares_vocabulary(predicted, truth_));
  if (need_match) {
    try {
      r.match = match_labels(predicted, truth_, dataset_);
    } catch (const Error& e) {
      throw SlamError("matching", e.what());
    }
    pred = r.match->matched;
    r.matched = true;
  }
  r.label_space = union_space(truth_.label_space(), pred.label_space());
  r.K = r.label_space.size();
  r.timings.matching = seconds_since(t0);

  t0 = Clock::now();
  EdgeAttributeMatrix z0;
  EdgeAttributeMatrix z1;
  try {
    z0 = edge_matrix(truth_.with_space(r.label_space));
    z1 = edge_matrix(pred.with_space(r.label_space));
  } catch (const Error& e) {
    throw SlamError("attributes", e.what());
  }
  r.z_rows_truth = z0.rows;
  r.z_rows_pred = z1.rows;
  r.timings.attributes = seconds_since(t0);

  t0 = Clock::now();
  std::vector<EmpiricalDistribution> samples;
  try {
    const auto m = static_cast<std::size_t>(config_.batch_size);
    const auto n = static_cast<std::size_t>(config_.num_samples);
    samples = kde_sample(z0, config_.bandwidth_h, m, n, mix_seed(config_.rng_seed, stream::kde));
    auto s1 = kde_sample(z1, config_.bandwidth_h, m, n, mix_seed(config_.rng_seed, stream::kde));
    samples.insert(samples.end(), std::make_move_iterator(s1.begin()), std::make_move_iterator(s1.end()));
  } catch (const Error& e) {
    throw SlamError("sampling", e.what());
  }
  r.timings.sampling = seconds_since(t0);

  t0 = Clock::now();
  try {
    const auto L = static_cast<std::size_t>(config_.num_projections);
    r.projections_used = effective_projections(r.K, L);
    const auto gram = sw_gram(samples, config_.gamma, L, mix_seed(config_.rng_seed, stream::projections), exec_);
    r.d = mmd_from_gram(gram, static_cast<std::size_t>(config_.num_samples), config_.mmd_estimator);
  } catch (const Error& e) {
    throw SlamError("discrepancy", e.what());
  }
  r.timings.discrepancy = seconds_since(t0);
  return r;
}

SlamResult slam_score(const Labeling& truth, const Labeling& predicted, const SpatialDataset& dataset,
                      const EvaluationConfig& config) {
  return SlamEvaluator(dataset, truth, config).score(predicted);
}

}  // namespace slam
