#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slam/attributes.hpp"
#include "slam/core.hpp"
#include "slam/graph.hpp"
#include "slam/kernels.hpp"
#include "slam/matching.hpp"

namespace slam {

class DiscrepancyError : public Error {
 public:
  using Error::Error;
};

// (1/m) sum of squared differences of order statistics.
double wasserstein_1d_sq(std::span<const double> a, std::span<const double> b);

// L unit directions in R^K, row-major, uniform on the sphere. For K = 1 the
// set is just {+1}: every direction gives the same value up to sign.
std::vector<double> draw_directions(std::size_t K, std::size_t L, std::uint64_t seed);
std::size_t effective_projections(std::size_t K, std::size_t L);

kernels::SortedProjections project_sorted(std::span<const EmpiricalDistribution> dists,
                                          std::span<const double> directions, std::size_t L);

double sliced_w2(const EmpiricalDistribution& p, const EmpiricalDistribution& q, std::size_t num_projections,
                 std::uint64_t seed);
double sw_gaussian_kernel(const EmpiricalDistribution& p, const EmpiricalDistribution& q, double gamma,
                          std::size_t num_projections, std::uint64_t seed);

// Symmetric S x S matrix of exp(-gamma * SW2) over one shared direction set.
struct KernelGram {
  std::size_t size = 0;
  std::vector<double> matrix;
  double at(std::size_t i, std::size_t j) const { return matrix[i * size + j]; }
};

// Squared sliced W2 between all pairs under one shared direction set.
std::vector<double> sliced_w2_matrix(std::span<const EmpiricalDistribution> dists, std::size_t num_projections,
                                     std::uint64_t seed, Exec exec = Exec::Parallel);
KernelGram sw_gram(std::span<const EmpiricalDistribution> dists, double gamma, std::size_t num_projections,
                   std::uint64_t seed, Exec exec = Exec::Parallel);

// MMD from a precomputed Gram over [samples0..., samples1...].
double mmd_from_gram(const KernelGram& gram, std::size_t n0, MmdEstimator estimator);

double mmd_discrepancy(std::span<const EmpiricalDistribution> samples0, std::span<const EmpiricalDistribution> samples1,
                       double gamma, std::size_t num_projections, std::uint64_t seed, MmdEstimator estimator,
                       Exec exec = Exec::Parallel);

class SlamError : public Error {
 public:
  SlamError(std::string stage, const std::string& what) : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct StageTimings {
  double matching = 0.0;
  double attributes = 0.0;
  double sampling = 0.0;
  double discrepancy = 0.0;
};

struct SlamResult {
  double d = 0.0;
  bool matched = false;  // whether Jaccard matching ran
  std::optional<MatchResult> match;
  std::vector<std::string> label_space;  // columns of Z, in order
  std::size_t K = 0;
  std::size_t num_edges = 0;
  std::size_t z_rows_truth = 0;
  std::size_t z_rows_pred = 0;
  std::size_t projections_used = 0;
  std::uint64_t seed = 0;
  StageTimings timings;
};

// Holds everything that depends only on the dataset and the truth: the
// spatial graph, truth edge types and the severity weights.
class SlamEvaluator {
 public:
  SlamEvaluator(const SpatialDataset& dataset, const Labeling& truth, EvaluationConfig config,
                Exec exec = Exec::Parallel);

  SlamResult score(const Labeling& predicted) const;

  const SpatialGraph& graph() const noexcept { return graph_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const EvaluationConfig& config() const noexcept { return config_; }
  double graph_seconds() const noexcept { return graph_seconds_; }

  // Z of a labeling already expressed over `space`.
  EdgeAttributeMatrix edge_matrix(const Labeling& labels) const;

 private:
  SpatialDataset dataset_;
  Labeling truth_;
  EvaluationConfig config_;
  Exec exec_;
  SpatialGraph graph_;
  std::vector<double> weights_;
  double graph_seconds_ = 0.0;
};

SlamResult slam_score(const Labeling& truth, const Labeling& predicted, const SpatialDataset& dataset,
                      const EvaluationConfig& config);

}  // namespace slam
