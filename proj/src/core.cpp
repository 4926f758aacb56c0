#include "slam/core.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace slam {

DatasetError::DatasetError(DatasetErrorKind kind, std::size_t row, const std::string& what)
    : Error(what), kind_(kind), row_(row) {}

LabelingError::LabelingError(LabelingErrorKind kind, const std::string& what)
    : Error(what), kind_(kind) {}

SpatialDataset::SpatialDataset(std::vector<std::string> spot_ids, std::vector<Point2> coords,
                               std::optional<AttributeMatrix> attributes)
    : ids_(std::move(spot_ids)), coords_(std::move(coords)), attributes_(std::move(attributes)) {
  if (ids_.empty()) throw DatasetError(DatasetErrorKind::Empty, 0, "dataset has no spots");
  if (coords_.size() != ids_.size()) {
    throw DatasetError(DatasetErrorKind::DimensionMismatch, 0,
                       "coordinate count " + std::to_string(coords_.size()) +
                           " != spot count " + std::to_string(ids_.size()));
  }
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw DatasetError(DatasetErrorKind::DuplicateId, i + 1, "duplicate spot_id '" + ids_[i] + "' at row " +
                                                                   std::to_string(i + 1));
    }
    if (!std::isfinite(coords_[i].x) || !std::isfinite(coords_[i].y)) {
      throw DatasetError(DatasetErrorKind::NonFinite, i + 1,
                         "non-finite coordinate at row " + std::to_string(i + 1));
    }
  }
  if (attributes_) {
    const auto& a = *attributes_;
    if (a.rows != ids_.size() || a.cols == 0 || a.values.size() != a.rows * a.cols) {
      throw DatasetError(DatasetErrorKind::DimensionMismatch, 0, "attribute matrix shape does not match spots");
    }
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      if (!std::isfinite(a.values[i])) {
        const std::size_t row = i / a.cols + 1;
        throw DatasetError(DatasetErrorKind::NonFinite, row, "non-finite attribute at row " + std::to_string(row));
      }
    }
  }
}

std::optional<std::size_t> SpatialDataset::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

std::optional<long long> parse_integer_token(std::string_view s) {
  long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || first == last) return std::nullopt;
  return v;
}

}  // namespace

bool token_less(std::string_view a, std::string_view b) {
  const auto ia = parse_integer_token(a);
  const auto ib = parse_integer_token(b);
  if (ia && ib) {
    if (*ia != *ib) return *ia < *ib;
    return a < b;  // "01" vs "1"
  }
  if (ia) return true;
  if (ib) return false;
  return a < b;
}

namespace {

std::vector<std::string> sorted_unique(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end(), [](const auto& x, const auto& y) { return token_less(x, y); });
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

}  // namespace

Labeling::Labeling(std::vector<std::string> labels, LabelRole role, std::vector<std::string> declared_space)
    : labels_(std::move(labels)), role_(role) {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) {
      throw LabelingError(LabelingErrorKind::EmptyLabel, "empty label token at position " + std::to_string(i));
    }
  }
  std::vector<std::string> used = sorted_unique(labels_);
  if (declared_space.empty()) {
    space_ = std::move(used);
  } else {
    space_ = sorted_unique(std::move(declared_space));
    for (const auto& t : used) {
      if (!std::binary_search(space_.begin(), space_.end(), t,
                              [](const auto& x, const auto& y) { return token_less(x, y); })) {
        throw LabelingError(LabelingErrorKind::LabelNotInSpace, "label '" + t + "' not in declared label space");
      }
    }
  }
  if (space_.empty()) throw LabelingError(LabelingErrorKind::Malformed, "label space is empty");

  std::unordered_map<std::string, int> code;
  for (std::size_t i = 0; i < space_.size(); ++i) code.emplace(space_[i], static_cast<int>(i) + 1);
  codes_.reserve(labels_.size());
  for (const auto& l : labels_) codes_.push_back(code.at(l));
}

std::optional<int> Labeling::code_of(std::string_view token) const {
  auto it = std::lower_bound(space_.begin(), space_.end(), token,
                             [](const auto& x, std::string_view y) { return token_less(x, y); });
  if (it == space_.end() || *it != token) return std::nullopt;
  return static_cast<int>(it - space_.begin()) + 1;
}

Labeling Labeling::with_space(const std::vector<std::string>& space) const {
  return Labeling(labels_, role_, union_space(space_, space));
}

std::vector<std::string> union_space(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> all(a);
  all.insert(all.end(), b.begin(), b.end());
  return sorted_unique(std::move(all));
}

bool shares_vocabulary(const Labeling& a, const Labeling& b) {
  const auto less = [](const auto& x, const auto& y) { return token_less(x, y); };
  const auto& sa = a.label_space();
  const auto& sb = b.label_space();
  return std::includes(sa.begin(), sa.end(), sb.begin(), sb.end(), less) ||
         std::includes(sb.begin(), sb.end(), sa.begin(), sa.end(), less);
}

void EvaluationConfig::validate() const {
  if (k_neighbors <= 0) throw ConfigError("k_neighbors must be positive");
  if (!(bandwidth_h > 0.0) || !std::isfinite(bandwidth_h)) throw ConfigError("bandwidth_h must be positive");
  if (bandwidth_h > 10.0) throw ConfigError("bandwidth_h must be <= 10");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("gamma must be positive");
  if (num_samples <= 0) throw ConfigError("num_samples must be positive");
  if (batch_size <= 0) throw ConfigError("batch_size must be positive");
  if (num_projections <= 0) throw ConfigError("num_projections must be positive");
}

SimilarityMode EvaluationConfig::resolved_similarity(const SpatialDataset& dataset) const {
  if (similarity_mode) return *similarity_mode;
  return dataset.has_attributes() ? SimilarityMode::CosineClamped : SimilarityMode::ConstantOne;
}

std::string to_string(MmdEstimator e) {
  return e == MmdEstimator::PaperVerbatim ? "paper-verbatim" : "standard-biased";
}
std::string to_string(SimilarityMode m) {
  return m == SimilarityMode::CosineClamped ? "cosine-clamped" : "constant-one";
}
std::string to_string(ZeroRows z) { return z == ZeroRows::Keep ? "keep" : "drop"; }
std::string to_string(MatchPolicy p) {
  switch (p) {
    case MatchPolicy::Auto: return "auto";
    case MatchPolicy::Always: return "always";
    case MatchPolicy::Never: return "never";
  }
  return "auto";
}

MmdEstimator parse_estimator(std::string_view s) {
  if (s == "paper-verbatim") return MmdEstimator::PaperVerbatim;
  if (s == "standard-biased") return MmdEstimator::StandardBiased;
  throw ConfigError("unknown mmd estimator '" + std::string(s) + "'");
}
SimilarityMode parse_similarity(std::string_view s) {
  if (s == "cosine-clamped") return SimilarityMode::CosineClamped;
  if (s == "constant-one") return SimilarityMode::ConstantOne;
  throw ConfigError("unknown similarity mode '" + std::string(s) + "'");
}
ZeroRows parse_zero_rows(std::string_view s) {
  if (s == "keep") return ZeroRows::Keep;
  if (s == "drop") return ZeroRows::Drop;
  throw ConfigError("unknown zero_rows policy '" + std::string(s) + "'");
}
MatchPolicy parse_match_policy(std::string_view s) {
  if (s == "auto") return MatchPolicy::Auto;
  if (s == "always") return MatchPolicy::Always;
  if (s == "never") return MatchPolicy::Never;
  throw ConfigError("unknown match policy '" + std::string(s) + "'");
}

}  // namespace slam
