#pragma once

#include <map>
#include <string>
#include <vector>

#include "slam/core.hpp"

namespace slam {

enum class MatchingErrorKind { SizeMismatch, ReassignmentExhausted, EmptySplit, Uncovered };

class MatchingError : public Error {
 public:
  MatchingError(MatchingErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  MatchingErrorKind kind() const noexcept { return kind_; }

 private:
  MatchingErrorKind kind_;
};

// J[u][v] = |C_u ∩ C_v| / |C_u ∪ C_v| over the labels each side actually uses.
struct JaccardMatrix {
  std::vector<std::string> pred_tokens;
  std::vector<std::string> truth_tokens;
  std::vector<std::vector<double>> J;
};

struct SplitRecord {
  std::string source;  // predicted token the spots were taken from
  std::vector<std::size_t> spots;
  std::string target;  // truth token they were matched to
};

struct MatchResult {
  Labeling matched;                           // over the truth label space
  std::map<std::string, std::string> assignment;  // predicted token -> truth token
  std::vector<SplitRecord> splits;
  JaccardMatrix jaccard;
};

JaccardMatrix jaccard_matrix(const Labeling& pred, const Labeling& truth);

// Jaccard matching with cluster reassignment (more predicted than true
// labels) or cluster split (fewer). Ties go to the smaller token.
// A labeling that is itself a matching output over the truth space is
// returned unchanged with the identity assignment.
MatchResult match_labels(const Labeling& pred, const Labeling& truth, const SpatialDataset& dataset);

}  // namespace slam
