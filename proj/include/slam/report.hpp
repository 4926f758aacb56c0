#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "slam/core.hpp"
#include "slam/discrepancy.hpp"
#include "slam/metrics.hpp"

namespace slam {

struct NamedLabeling {
  std::string name;
  std::string source;  // file path or other provenance, echoed verbatim
  Labeling labels;
};

struct LabelingReport {
  std::string name;
  std::string source;
  SlamResult slam;
  bool supervised = false;  // supervised metrics were computed
  std::vector<MetricValue> benchmarks;
  std::vector<std::string> notices;
};

struct QEntry {
  std::string more;  // name of the more erroneous labeling
  std::string less;
  std::string metric;
  double s1 = 0.0;
  double s2 = 0.0;
  std::optional<double> q;
  std::string note;
};

struct EvaluationReport {
  EvaluationConfig config;
  std::string dataset_source;
  std::size_t spots = 0;
  std::size_t attribute_dim = 0;
  std::string truth_source;
  std::vector<std::string> truth_space;
  std::size_t num_edges = 0;
  double graph_seconds = 0.0;
  std::vector<LabelingReport> labelings;
  std::vector<QEntry> q;
};

// Index pair into the predicted list: (more erroneous, less erroneous).
struct QPair {
  std::size_t more = 0;
  std::size_t less = 0;
};

EvaluationReport evaluate_labelings(const SpatialDataset& dataset, const std::string& dataset_source,
                                    const Labeling& truth, const std::string& truth_source,
                                    const std::vector<NamedLabeling>& predicted, const EvaluationConfig& config,
                                    const std::vector<QPair>& pairs = {}, Exec exec = Exec::Parallel);

// Timings are wall-clock and therefore left out unless asked for; without
// them the output is a pure function of inputs and config.
std::string report_json(const EvaluationReport& report, bool with_timings = false);

// Human-readable score table.
void write_report_table(std::ostream& out, const EvaluationReport& report);

}  // namespace slam
