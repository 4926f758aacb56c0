#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "slam/core.hpp"

namespace slam {

enum class DatasetFormat { Csv, Json };

// Dataset CSV: header `spot_id,x,y[,a1..ag]`.
// Dataset JSON: {"spot_ids": [...], "coords": [[x,y],...], "attributes": [[...],...]}
// with "attributes" optional.
SpatialDataset load_dataset(const std::filesystem::path& path, DatasetFormat format);
SpatialDataset load_dataset(const std::filesystem::path& path);  // by extension
SpatialDataset read_dataset_csv(std::istream& in);
SpatialDataset read_dataset_json(std::istream& in);
void write_dataset_csv(std::ostream& out, const SpatialDataset& dataset);
void save_dataset(const std::filesystem::path& path, const SpatialDataset& dataset);

// Labeling CSV: header `spot_id,label`. Rows may come in any order; the
// result is aligned to the dataset's spot order.
Labeling load_labeling(const std::filesystem::path& path, const SpatialDataset& dataset,
                       LabelRole role = LabelRole::Predicted);
Labeling read_labeling_csv(std::istream& in, const SpatialDataset& dataset, LabelRole role = LabelRole::Predicted);
void write_labeling_csv(std::ostream& out, const SpatialDataset& dataset, const Labeling& labeling);
void save_labeling(const std::filesystem::path& path, const SpatialDataset& dataset, const Labeling& labeling);

// Config JSON mirrors EvaluationConfig field names. Absent fields keep the
// values already in `base`.
EvaluationConfig read_config_json(std::string_view text, EvaluationConfig base = {});
EvaluationConfig load_config(const std::filesystem::path& path, EvaluationConfig base = {});
std::string config_to_json(const EvaluationConfig& config);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

// Splits one CSV record; handles double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace slam
