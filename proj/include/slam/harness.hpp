#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "slam/core.hpp"
#include "slam/metrics.hpp"

namespace slam {

class HarnessError : public Error {
 public:
  using Error::Error;
};

// Q = (-1)^n (s1 - s2) / r, n = 1 for higher-better metrics. s1 scores the
// more erroneous labeling. r follows the metric's range: sup - inf when both
// bounds exist, s1 - inf with only a lower bound, sup - s2 with only an
// upper bound, else max(|s1|, |s2|).
double q_coefficient(const MetricDescriptor& metric, double s1, double s2);

enum class CaseId { I = 1, II, III, IV, V, VI };
CaseId parse_case_id(std::string_view s);  // "I".."VI" or "1".."6"
std::string to_string(CaseId id);

struct CaseInstance {
  CaseId id;
  std::uint64_t seed = 0;
  SpatialDataset dataset;
  Labeling truth;
  // Ordered from more to less erroneous; Case II holds its ten steps in
  // increasing mislabel order instead.
  std::vector<Labeling> labelings;
  std::vector<std::string> names;
  std::vector<std::size_t> mislabels;
  // Evaluation settings the case was designed for (k for square lattices).
  EvaluationConfig config;
  std::map<std::string, std::string> params;
};

CaseInstance generate_case(CaseId id, std::uint64_t seed);

// Case II mislabel counts, one per step.
const std::vector<std::size_t>& case2_counts();

struct QRow {
  std::string metric;
  double s1 = 0.0;  // more erroneous
  double s2 = 0.0;
  double q = 0.0;
};

// SLAM and every benchmark for labelings[more] vs labelings[less].
std::vector<QRow> case_q_table(const CaseInstance& c, const EvaluationConfig& config, std::size_t more = 0,
                               std::size_t less = 1);

struct SensitivityRow {
  double h = 0.0;
  std::size_t step = 0;  // 1-based
  std::size_t mislabels = 0;
  double error_rate = 0.0;
  double d = 0.0;
};

// SLAM for every (h, Case II step) cell, sorted by h then step.
std::vector<SensitivityRow> sensitivity_sweep(const std::vector<double>& h_values, const CaseInstance& base,
                                              const EvaluationConfig& config);

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct ComplexityRow {
  std::string axis;  // "n" or "K"
  std::size_t n = 0;
  std::size_t K = 0;
  double seconds = 0.0;
  double d = 0.0;
};

// Random square-ish lattices; each cell mislabels half the spots at random.
// Timings cover slam_score end to end, graph construction included.
std::vector<ComplexityRow> complexity_sweep(const std::vector<std::size_t>& spot_counts,
                                            const std::vector<std::size_t>& label_counts, const EvaluationConfig& config,
                                            std::size_t n_for_label_sweep = 1000);

void write_sensitivity_csv(std::ostream& out, const std::vector<SensitivityRow>& rows);
void write_complexity_csv(std::ostream& out, const std::vector<ComplexityRow>& rows);

}  // namespace slam
