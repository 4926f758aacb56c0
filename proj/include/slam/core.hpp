#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace slam {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DatasetErrorKind { Io, MalformedRow, DuplicateId, DimensionMismatch, NonFinite, Empty };

class DatasetError : public Error {
 public:
  DatasetError(DatasetErrorKind kind, std::size_t row, const std::string& what);
  DatasetErrorKind kind() const noexcept { return kind_; }
  // 1-based data row (header excluded); 0 when not tied to a row.
  std::size_t row() const noexcept { return row_; }

 private:
  DatasetErrorKind kind_;
  std::size_t row_;
};

enum class LabelingErrorKind { Io, Malformed, MissingSpot, UnknownSpot, DuplicateSpot, EmptyLabel, LabelNotInSpace };

class LabelingError : public Error {
 public:
  LabelingError(LabelingErrorKind kind, const std::string& what);
  LabelingErrorKind kind() const noexcept { return kind_; }

 private:
  LabelingErrorKind kind_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_distance(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Dense row-major n x g matrix of per-spot attributes (e.g. expression).
struct AttributeMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
};

// Spot coordinates plus optional attributes. Validated on construction and
// immutable afterwards.
class SpatialDataset {
 public:
  SpatialDataset(std::vector<std::string> spot_ids, std::vector<Point2> coords,
                 std::optional<AttributeMatrix> attributes = std::nullopt);

  std::size_t size() const noexcept { return ids_.size(); }
  const std::vector<std::string>& spot_ids() const noexcept { return ids_; }
  const std::vector<Point2>& coords() const noexcept { return coords_; }
  bool has_attributes() const noexcept { return attributes_.has_value(); }
  const std::optional<AttributeMatrix>& attributes() const noexcept { return attributes_; }
  std::size_t attribute_dim() const noexcept { return attributes_ ? attributes_->cols : 0; }
  std::optional<std::size_t> index_of(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<Point2> coords_;
  std::optional<AttributeMatrix> attributes_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Natural token order: integer tokens compare numerically and precede
// non-integer tokens, which compare lexicographically.
bool token_less(std::string_view a, std::string_view b);

// Matched marks the output of label matching, already over the truth space.
enum class LabelRole { GroundTruth, Predicted, Matched };

// Per-spot label tokens aligned to a dataset's spot order. The label space
// is the declared vocabulary (it may contain tokens no spot carries), kept
// sorted in natural token order. Codes are dense 1..K over that space.
class Labeling {
 public:
  explicit Labeling(std::vector<std::string> labels, LabelRole role = LabelRole::Predicted,
                    std::vector<std::string> declared_space = {});

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<std::string>& label_space() const noexcept { return space_; }
  std::size_t num_labels() const noexcept { return space_.size(); }
  LabelRole role() const noexcept { return role_; }

  // 1-based code of each spot's label in label_space().
  const std::vector<int>& codes() const noexcept { return codes_; }
  std::optional<int> code_of(std::string_view token) const;

  // Same labels over a wider declared space (must contain the current one).
  Labeling with_space(const std::vector<std::string>& space) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::string> space_;
  std::vector<int> codes_;
  LabelRole role_;
};

// Sorted union of two label spaces.
std::vector<std::string> union_space(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b);

// True when one token set contains the other, i.e. both labelings speak the
// same vocabulary and can be compared without label matching.
bool shares_vocabulary(const Labeling& a, const Labeling& b);

enum class MmdEstimator { PaperVerbatim, StandardBiased };
enum class SimilarityMode { CosineClamped, ConstantOne };
enum class ZeroRows { Keep, Drop };
enum class MatchPolicy { Auto, Always, Never };

struct EvaluationConfig {
  int k_neighbors = 6;
  double bandwidth_h = 0.1;
  double gamma = 1.0;
  int num_samples = 20;
  int batch_size = 100;
  int num_projections = 50;
  std::uint64_t rng_seed = 42;
  MmdEstimator mmd_estimator = MmdEstimator::StandardBiased;
  // nullopt: cosine-clamped when the dataset has attributes, else constant-one.
  std::optional<SimilarityMode> similarity_mode;
  ZeroRows zero_rows = ZeroRows::Keep;
  MatchPolicy match = MatchPolicy::Auto;

  void validate() const;
  SimilarityMode resolved_similarity(const SpatialDataset& dataset) const;
};

std::string to_string(MmdEstimator e);
std::string to_string(SimilarityMode m);
std::string to_string(ZeroRows z);
std::string to_string(MatchPolicy p);
MmdEstimator parse_estimator(std::string_view s);
SimilarityMode parse_similarity(std::string_view s);
ZeroRows parse_zero_rows(std::string_view s);
MatchPolicy parse_match_policy(std::string_view s);

}  // namespace slam
