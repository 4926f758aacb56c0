#include "slam/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace slam {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DatasetError(DatasetErrorKind::Io, 0, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.emplace_back(trim(cur));
  return fields;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

SpatialDataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DatasetError(DatasetErrorKind::Empty, 0, "dataset file is empty");
  const auto header = split_csv_line(line);
  if (header.size() < 3 || header[0] != "spot_id" || header[1] != "x" || header[2] != "y") {
    throw DatasetError(DatasetErrorKind::MalformedRow, 0, "dataset header must start with spot_id,x,y");
  }
  const std::size_t g = header.size() - 3;

  std::vector<std::string> ids;
  std::vector<Point2> coords;
  std::vector<double> attrs;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw DatasetError(DatasetErrorKind::DimensionMismatch, row,
                         "row " + std::to_string(row) + " has " + std::to_string(f.size()) + " fields, expected " +
                             std::to_string(header.size()));
    }
    if (f[0].empty()) throw DatasetError(DatasetErrorKind::MalformedRow, row, "row " + std::to_string(row) + ": empty spot_id");
    Point2 p;
    if (!parse_double(f[1], p.x) || !parse_double(f[2], p.y)) {
      throw DatasetError(DatasetErrorKind::MalformedRow, row, "row " + std::to_string(row) + ": unparsable coordinate");
    }
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DatasetError(DatasetErrorKind::NonFinite, row, "row " + std::to_string(row) + ": non-finite coordinate");
    }
    for (std::size_t j = 0; j < g; ++j) {
      double v = 0.0;
      if (!parse_double(f[3 + j], v)) {
        throw DatasetError(DatasetErrorKind::MalformedRow, row, "row " + std::to_string(row) + ": unparsable attribute");
      }
      if (!std::isfinite(v)) {
        throw DatasetError(DatasetErrorKind::NonFinite, row, "row " + std::to_string(row) + ": non-finite attribute");
      }
      attrs.push_back(v);
    }
    ids.push_back(f[0]);
    coords.push_back(p);
  }
  std::optional<AttributeMatrix> am;
  if (g > 0) am = AttributeMatrix{ids.size(), g, std::move(attrs)};
  return SpatialDataset(std::move(ids), std::move(coords), std::move(am));
}

SpatialDataset read_dataset_json(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DatasetError(DatasetErrorKind::MalformedRow, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("spot_ids") || !j.contains("coords")) {
    throw DatasetError(DatasetErrorKind::MalformedRow, 0, "dataset JSON needs spot_ids and coords");
  }
  const auto& jid = j.at("spot_ids");
  const auto& jc = j.at("coords");
  if (!jid.is_array() || !jc.is_array() || jid.size() != jc.size()) {
    throw DatasetError(DatasetErrorKind::DimensionMismatch, 0, "spot_ids and coords must be arrays of equal length");
  }
  std::vector<std::string> ids;
  std::vector<Point2> coords;
  for (std::size_t i = 0; i < jid.size(); ++i) {
    const auto& id = jid[i];
    const auto& c = jc[i];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number()) {
      throw DatasetError(DatasetErrorKind::MalformedRow, i + 1, "row " + std::to_string(i + 1) + ": coords must be [x, y]");
    }
    ids.push_back(id.is_string() ? id.get<std::string>() : id.dump());
    coords.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  std::optional<AttributeMatrix> am;
  if (j.contains("attributes") && !j.at("attributes").is_null()) {
    const auto& ja = j.at("attributes");
    if (!ja.is_array() || ja.size() != ids.size()) {
      throw DatasetError(DatasetErrorKind::DimensionMismatch, 0, "attributes must have one row per spot");
    }
    AttributeMatrix m;
    m.rows = ids.size();
    for (std::size_t i = 0; i < ja.size(); ++i) {
      const auto& r = ja[i];
      if (!r.is_array()) throw DatasetError(DatasetErrorKind::MalformedRow, i + 1, "attribute row must be an array");
      if (i == 0) m.cols = r.size();
      if (r.size() != m.cols || m.cols == 0) {
        throw DatasetError(DatasetErrorKind::DimensionMismatch, i + 1,
                           "row " + std::to_string(i + 1) + ": attribute dimension mismatch");
      }
      for (const auto& v : r) {
        if (!v.is_number()) throw DatasetError(DatasetErrorKind::MalformedRow, i + 1, "non-numeric attribute");
        m.values.push_back(v.get<double>());
      }
    }
    am = std::move(m);
  }
  return SpatialDataset(std::move(ids), std::move(coords), std::move(am));
}

SpatialDataset load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  auto in = open_in(path);
  return format == DatasetFormat::Csv ? read_dataset_csv(in) : read_dataset_json(in);
}

SpatialDataset load_dataset(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return load_dataset(path, ext == ".json" ? DatasetFormat::Json : DatasetFormat::Csv);
}

void write_dataset_csv(std::ostream& out, const SpatialDataset& dataset) {
  out << "spot_id,x,y";
  for (std::size_t j = 0; j < dataset.attribute_dim(); ++j) out << ",a" << (j + 1);
  out << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& p = dataset.coords()[i];
    out << dataset.spot_ids()[i] << ',' << format_double(p.x) << ',' << format_double(p.y);
    if (dataset.has_attributes()) {
      for (double v : dataset.attributes()->row(i)) out << ',' << format_double(v);
    }
    out << '\n';
  }
}

void save_dataset(const std::filesystem::path& path, const SpatialDataset& dataset) {
  auto out = open_out(path);
  write_dataset_csv(out, dataset);
}

Labeling read_labeling_csv(std::istream& in, const SpatialDataset& dataset, LabelRole role) {
  std::string line;
  if (!std::getline(in, line)) throw LabelingError(LabelingErrorKind::Malformed, "labeling file is empty");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "spot_id" || header[1] != "label") {
    throw LabelingError(LabelingErrorKind::Malformed, "labeling header must be spot_id,label");
  }
  std::vector<std::string> labels(dataset.size());
  std::vector<bool> seen(dataset.size(), false);
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto f = split_csv_line(line);
    if (f.size() != 2) {
      throw LabelingError(LabelingErrorKind::Malformed, "row " + std::to_string(row) + ": expected 2 fields");
    }
    const auto idx = dataset.index_of(f[0]);
    if (!idx) throw LabelingError(LabelingErrorKind::UnknownSpot, "unknown spot '" + f[0] + "'");
    if (seen[*idx]) throw LabelingError(LabelingErrorKind::DuplicateSpot, "spot '" + f[0] + "' labeled twice");
    if (f[1].empty()) throw LabelingError(LabelingErrorKind::EmptyLabel, "empty label for spot '" + f[0] + "'");
    seen[*idx] = true;
    labels[*idx] = f[1];
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw LabelingError(LabelingErrorKind::MissingSpot, "missing label for spot '" + dataset.spot_ids()[i] + "'");
  }
  return Labeling(std::move(labels), role);
}

Labeling load_labeling(const std::filesystem::path& path, const SpatialDataset& dataset, LabelRole role) {
  std::ifstream in(path);
  if (!in) throw LabelingError(LabelingErrorKind::Io, "cannot open '" + path.string() + "'");
  return read_labeling_csv(in, dataset, role);
}

void write_labeling_csv(std::ostream& out, const SpatialDataset& dataset, const Labeling& labeling) {
  if (labeling.size() != dataset.size()) throw LabelingError(LabelingErrorKind::Malformed, "labeling/dataset size mismatch");
  out << "spot_id,label\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) out << dataset.spot_ids()[i] << ',' << labeling.labels()[i] << '\n';
}

void save_labeling(const std::filesystem::path& path, const SpatialDataset& dataset, const Labeling& labeling) {
  auto out = open_out(path);
  write_labeling_csv(out, dataset, labeling);
}

EvaluationConfig read_config_json(std::string_view text, EvaluationConfig cfg) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "k_neighbors") cfg.k_neighbors = v.get<int>();
      else if (key == "bandwidth_h") cfg.bandwidth_h = v.get<double>();
      else if (key == "gamma") cfg.gamma = v.get<double>();
      else if (key == "num_samples") cfg.num_samples = v.get<int>();
      else if (key == "batch_size") cfg.batch_size = v.get<int>();
      else if (key == "num_projections") cfg.num_projections = v.get<int>();
      else if (key == "rng_seed") cfg.rng_seed = v.get<std::uint64_t>();
      else if (key == "mmd_estimator") cfg.mmd_estimator = parse_estimator(v.get<std::string>());
      else if (key == "similarity_mode") {
        const auto s = v.is_null() ? std::string("auto") : v.get<std::string>();
        cfg.similarity_mode = s == "auto" ? std::nullopt : std::optional(parse_similarity(s));
      } else if (key == "zero_rows") cfg.zero_rows = parse_zero_rows(v.get<std::string>());
      else if (key == "match") cfg.match = parse_match_policy(v.get<std::string>());
      else throw ConfigError("unknown config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

EvaluationConfig load_config(const std::filesystem::path& path, EvaluationConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_config_json(ss.str(), base);
}

std::string config_to_json(const EvaluationConfig& c) {
  json j = json::object();
  j["k_neighbors"] = c.k_neighbors;
  j["bandwidth_h"] = c.bandwidth_h;
  j["gamma"] = c.gamma;
  j["num_samples"] = c.num_samples;
  j["batch_size"] = c.batch_size;
  j["num_projections"] = c.num_projections;
  j["rng_seed"] = c.rng_seed;
  j["mmd_estimator"] = to_string(c.mmd_estimator);
  j["similarity_mode"] = c.similarity_mode ? to_string(*c.similarity_mode) : std::string("auto");
  j["zero_rows"] = to_string(c.zero_rows);
  j["match"] = to_string(c.match);
  return j.dump(2);
}

}  // namespace slam
