#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slam/core.hpp"

namespace slam {

class MetricError : public Error {
 public:
  using Error::Error;
};

enum class Direction { HigherBetter, LowerBetter };
enum class MetricFamily { Slam, Supervised, External, Internal };

struct MetricDescriptor {
  std::string name;
  MetricFamily family;
  std::optional<double> lower;  // nullopt: unbounded
  std::optional<double> upper;
  bool lower_open = false;
  bool upper_open = false;
  Direction direction;

  std::string range_text() const;  // e.g. "[0, 1]", "(0, inf)"
};

// SLAM first, then the fourteen benchmarks.
const std::vector<MetricDescriptor>& metric_catalog();
const MetricDescriptor& metric_descriptor(std::string_view name);
std::string catalog_json();

struct SupervisedScores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Both labelings must declare the same label space. Precision, recall and F1
// are macro averages; a class with a zero denominator scores 0.
SupervisedScores supervised_scores(const Labeling& truth, const Labeling& pred);

double ari(const Labeling& truth, const Labeling& pred);
double nmi(const Labeling& truth, const Labeling& pred);
double v_measure(const Labeling& truth, const Labeling& pred);
double fmi(const Labeling& truth, const Labeling& pred);
// Macro mean over the union of both label spaces, matching tokens by name.
double jaccard_score(const Labeling& truth, const Labeling& pred);

double asw(std::span<const Point2> coords, const Labeling& labels);
double chaos(std::span<const Point2> coords, const Labeling& labels);
double pas(std::span<const Point2> coords, const Labeling& labels);
double ch_index(std::span<const Point2> coords, const Labeling& labels);
double db_index(std::span<const Point2> coords, const Labeling& labels);

struct MetricValue {
  std::string name;
  std::optional<double> value;  // nullopt when not applicable
  std::string note;             // why it was skipped
};

// Every benchmark that applies to the pair. Supervised metrics need
// `supervised_ok`; internal metrics look at `pred` only. The Jaccard score
// compares tokens by name, so for cluster outputs pass the matched labeling.
std::vector<MetricValue> benchmark_scores(std::span<const Point2> coords, const Labeling& truth, const Labeling& pred,
                                          bool supervised_ok, const Labeling* matched = nullptr);

}  // namespace slam
