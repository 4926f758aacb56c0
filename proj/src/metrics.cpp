#include "slam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"
#include "slam/graph.hpp"
#include "slam/io.hpp"
#include "slam/kernels.hpp"
#include "slam/numeric.hpp"

namespace slam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

MetricDescriptor make(std::string name, MetricFamily fam, std::optional<double> lo, std::optional<double> hi,
                      Direction dir, bool lo_open = false, bool hi_open = false) {
  return MetricDescriptor{std::move(name), fam, lo, hi, lo_open, hi_open, dir};
}

double comb2(std::size_t k) { return static_cast<double>(k) * static_cast<double>(k == 0 ? 0 : k - 1) / 2.0; }

struct Contingency {
  std::size_t n = 0;
  std::size_t rows = 0;  // truth codes
  std::size_t cols = 0;  // pred codes
  std::vector<std::size_t> cell;
  std::vector<std::size_t> a;  // row sums
  std::vector<std::size_t> b;  // column sums

  std::size_t at(std::size_t i, std::size_t j) const { return cell[i * cols + j]; }
};

Contingency contingency(const Labeling& truth, const Labeling& pred) {
  if (truth.size() != pred.size()) throw MetricError("labelings differ in length");
  Contingency c;
  c.n = truth.size();
  c.rows = truth.num_labels();
  c.cols = pred.num_labels();
  c.cell.assign(c.rows * c.cols, 0);
  c.a.assign(c.rows, 0);
  c.b.assign(c.cols, 0);
  for (std::size_t s = 0; s < c.n; ++s) {
    const auto i = static_cast<std::size_t>(truth.codes()[s] - 1);
    const auto j = static_cast<std::size_t>(pred.codes()[s] - 1);
    ++c.cell[i * c.cols + j];
    ++c.a[i];
    ++c.b[j];
  }
  return c;
}

// Same grouping up to token names: every nonempty row and column holds one
// nonzero cell.
bool same_partition(const Contingency& c) {
  for (std::size_t i = 0; i < c.rows; ++i) {
    std::size_t nz = 0;
    for (std::size_t j = 0; j < c.cols; ++j) nz += c.at(i, j) != 0;
    if (nz > 1) return false;
  }
  for (std::size_t j = 0; j < c.cols; ++j) {
    std::size_t nz = 0;
    for (std::size_t i = 0; i < c.rows; ++i) nz += c.at(i, j) != 0;
    if (nz > 1) return false;
  }
  return true;
}

double entropy(const std::vector<std::size_t>& counts, std::size_t n) {
  ExactAccumulator acc;
  const double N = static_cast<double>(n);
  for (std::size_t k : counts) {
    if (k == 0) continue;
    const double p = static_cast<double>(k) / N;
    acc.add(-p * std::log(p));
  }
  return acc.value();
}

double mutual_information(const Contingency& c) {
  ExactAccumulator acc;
  const double N = static_cast<double>(c.n);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      const auto nij = c.at(i, j);
      if (nij == 0) continue;
      const double x = static_cast<double>(nij);
      acc.add(x / N * std::log(N * x / (static_cast<double>(c.a[i]) * static_cast<double>(c.b[j]))));
    }
  }
  return std::max(0.0, acc.value());
}

// H(row | col) = -sum n_ij/N log(n_ij / b_j).
double conditional_entropy_rows(const Contingency& c) {
  ExactAccumulator acc;
  const double N = static_cast<double>(c.n);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      const auto nij = c.at(i, j);
      if (nij == 0) continue;
      const double x = static_cast<double>(nij);
      acc.add(-x / N * std::log(x / static_cast<double>(c.b[j])));
    }
  }
  return std::max(0.0, acc.value());
}

double conditional_entropy_cols(const Contingency& c) {
  ExactAccumulator acc;
  const double N = static_cast<double>(c.n);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      const auto nij = c.at(i, j);
      if (nij == 0) continue;
      const double x = static_cast<double>(nij);
      acc.add(-x / N * std::log(x / static_cast<double>(c.a[i])));
    }
  }
  return std::max(0.0, acc.value());
}

struct Clusters {
  std::vector<int> code;  // 0-based compact cluster per spot
  std::size_t count = 0;
  std::vector<std::size_t> size;
};

Clusters compact(std::span<const Point2> coords, const Labeling& labels) {
  if (coords.size() != labels.size()) throw MetricError("coordinates and labels differ in length");
  std::vector<int> remap(labels.num_labels() + 1, -1);
  Clusters c;
  // Order clusters by label code so results do not depend on spot order.
  std::vector<char> used(labels.num_labels() + 1, 0);
  for (int k : labels.codes()) used[static_cast<std::size_t>(k)] = 1;
  for (std::size_t k = 1; k < used.size(); ++k) {
    if (used[k]) remap[k] = static_cast<int>(c.count++);
  }
  c.size.assign(c.count, 0);
  c.code.reserve(labels.size());
  for (int k : labels.codes()) {
    const int v = remap[static_cast<std::size_t>(k)];
    c.code.push_back(v);
    ++c.size[static_cast<std::size_t>(v)];
  }
  return c;
}

std::vector<Point2> centroids(std::span<const Point2> coords, const Clusters& c) {
  std::vector<ExactAccumulator> sx(c.count);
  std::vector<ExactAccumulator> sy(c.count);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    sx[static_cast<std::size_t>(c.code[i])].add(coords[i].x);
    sy[static_cast<std::size_t>(c.code[i])].add(coords[i].y);
  }
  std::vector<Point2> out(c.count);
  for (std::size_t k = 0; k < c.count; ++k) {
    const double m = static_cast<double>(c.size[k]);
    out[k] = {sx[k].value() / m, sy[k].value() / m};
  }
  return out;
}

void require_two_clusters(const Clusters& c, const char* metric) {
  if (c.count < 2) throw MetricError(std::string(metric) + " needs at least 2 clusters");
}

}  // namespace

std::string MetricDescriptor::range_text() const {
  const auto num = [](double v) { return format_double(v); };
  std::string s = lower ? (lower_open ? "(" : "[") + num(*lower) : std::string("(-inf");
  s += ", ";
  s += upper ? num(*upper) + (upper_open ? ")" : "]") : std::string("inf)");
  return s;
}

const std::vector<MetricDescriptor>& metric_catalog() {
  static const std::vector<MetricDescriptor> catalog = {
      make("slam", MetricFamily::Slam, 0.0, 2.0, Direction::LowerBetter),
      make("accuracy", MetricFamily::Supervised, 0.0, 1.0, Direction::HigherBetter),
      make("precision", MetricFamily::Supervised, 0.0, 1.0, Direction::HigherBetter),
      make("recall", MetricFamily::Supervised, 0.0, 1.0, Direction::HigherBetter),
      make("f1", MetricFamily::Supervised, 0.0, 1.0, Direction::HigherBetter),
      make("nmi", MetricFamily::External, 0.0, 1.0, Direction::HigherBetter),
      make("ari", MetricFamily::External, -1.0, 1.0, Direction::HigherBetter),
      make("jaccard", MetricFamily::External, 0.0, 1.0, Direction::HigherBetter),
      make("v_measure", MetricFamily::External, 0.0, 1.0, Direction::HigherBetter),
      make("fmi", MetricFamily::External, 0.0, 1.0, Direction::HigherBetter),
      make("chaos", MetricFamily::Internal, 0.0, std::nullopt, Direction::LowerBetter, true),
      make("pas", MetricFamily::Internal, 0.0, 1.0, Direction::LowerBetter),
      make("asw", MetricFamily::Internal, -1.0, 1.0, Direction::HigherBetter),
      make("ch", MetricFamily::Internal, 0.0, std::nullopt, Direction::HigherBetter, true),
      make("db", MetricFamily::Internal, 0.0, std::nullopt, Direction::LowerBetter),
  };
  return catalog;
}

const MetricDescriptor& metric_descriptor(std::string_view name) {
  for (const auto& d : metric_catalog()) {
    if (d.name == name) return d;
  }
  throw MetricError("unknown metric '" + std::string(name) + "'");
}

std::string catalog_json() {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& d : metric_catalog()) {
    nlohmann::ordered_json j;
    j["name"] = d.name;
    j["family"] = d.family == MetricFamily::Slam         ? "slam"
                  : d.family == MetricFamily::Supervised ? "supervised"
                  : d.family == MetricFamily::External   ? "external"
                                                         : "internal";
    j["lower"] = d.lower ? nlohmann::ordered_json(*d.lower) : nlohmann::ordered_json(nullptr);
    j["upper"] = d.upper ? nlohmann::ordered_json(*d.upper) : nlohmann::ordered_json(nullptr);
    j["range"] = d.range_text();
    j["direction"] = d.direction == Direction::HigherBetter ? "higher-better" : "lower-better";
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

SupervisedScores supervised_scores(const Labeling& truth, const Labeling& pred) {
  if (truth.label_space() != pred.label_space()) {
    throw MetricError("supervised metrics need both labelings over the same label space");
  }
  const auto c = contingency(truth, pred);
  SupervisedScores s;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < c.rows; ++i) correct += c.at(i, i);
  s.accuracy = static_cast<double>(correct) / static_cast<double>(c.n);

  ExactAccumulator p;
  ExactAccumulator r;
  ExactAccumulator f;
  std::size_t classes = 0;
  for (std::size_t k = 0; k < c.rows; ++k) {
    if (c.a[k] == 0 && c.b[k] == 0) continue;  // label used by neither side
    ++classes;
    const double tp = static_cast<double>(c.at(k, k));
    const double pk = c.b[k] ? tp / static_cast<double>(c.b[k]) : 0.0;
    const double rk = c.a[k] ? tp / static_cast<double>(c.a[k]) : 0.0;
    p.add(pk);
    r.add(rk);
    f.add(pk + rk > 0.0 ? 2.0 * pk * rk / (pk + rk) : 0.0);
  }
  const double K = static_cast<double>(classes);
  s.precision = p.value() / K;
  s.recall = r.value() / K;
  s.f1 = f.value() / K;
  return s;
}

double ari(const Labeling& truth, const Labeling& pred) {
  const auto c = contingency(truth, pred);
  if (c.n < 2) throw MetricError("ARI needs at least 2 spots");
  double index = 0.0;
  for (auto v : c.cell) index += comb2(v);
  double sa = 0.0;
  double sb = 0.0;
  for (auto v : c.a) sa += comb2(v);
  for (auto v : c.b) sb += comb2(v);
  const double expected = sa * sb / comb2(c.n);
  const double max_index = (sa + sb) / 2.0;
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double nmi(const Labeling& truth, const Labeling& pred) {
  const auto c = contingency(truth, pred);
  if (c.n == 0) throw MetricError("NMI needs at least 1 spot");
  if (same_partition(c)) return 1.0;
  const double hu = entropy(c.a, c.n);
  const double hv = entropy(c.b, c.n);
  if (hu == 0.0 || hv == 0.0) return 0.0;
  return std::clamp(mutual_information(c) / std::sqrt(hu * hv), 0.0, 1.0);
}

double v_measure(const Labeling& truth, const Labeling& pred) {
  const auto c = contingency(truth, pred);
  if (c.n == 0) throw MetricError("V-measure needs at least 1 spot");
  if (same_partition(c)) return 1.0;
  const double hc = entropy(c.a, c.n);
  const double hk = entropy(c.b, c.n);
  const double h = hc == 0.0 ? 1.0 : 1.0 - conditional_entropy_rows(c) / hc;
  const double comp = hk == 0.0 ? 1.0 : 1.0 - conditional_entropy_cols(c) / hk;
  if (h + comp == 0.0) return 0.0;
  return std::clamp(2.0 * h * comp / (h + comp), 0.0, 1.0);
}

double fmi(const Labeling& truth, const Labeling& pred) {
  const auto c = contingency(truth, pred);
  double tp = 0.0;
  for (auto v : c.cell) tp += comb2(v);
  if (tp == 0.0) return 0.0;
  double same_truth = 0.0;
  double same_pred = 0.0;
  for (auto v : c.a) same_truth += comb2(v);
  for (auto v : c.b) same_pred += comb2(v);
  return tp / std::sqrt(same_pred * same_truth);
}

double jaccard_score(const Labeling& truth, const Labeling& pred) {
  if (truth.size() != pred.size()) throw MetricError("labelings differ in length");
  const auto space = union_space(truth.label_space(), pred.label_space());
  const Labeling t = truth.with_space(space);
  const Labeling p = pred.with_space(space);
  std::vector<std::size_t> inter(space.size(), 0);
  std::vector<std::size_t> uni(space.size(), 0);
  for (std::size_t s = 0; s < t.size(); ++s) {
    const auto a = static_cast<std::size_t>(t.codes()[s] - 1);
    const auto b = static_cast<std::size_t>(p.codes()[s] - 1);
    if (a == b) {
      ++inter[a];
      ++uni[a];
    } else {
      ++uni[a];
      ++uni[b];
    }
  }
  ExactAccumulator acc;
  for (std::size_t l = 0; l < space.size(); ++l) {
    acc.add(uni[l] ? static_cast<double>(inter[l]) / static_cast<double>(uni[l]) : 0.0);
  }
  return acc.value() / static_cast<double>(space.size());
}

double asw(std::span<const Point2> coords, const Labeling& labels) {
  const auto c = compact(coords, labels);
  require_two_clusters(c, "ASW");
  const auto sums = kernels::parallel::cluster_distance_sums(coords, c.code, c.count);
  ExactAccumulator acc;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto ci = static_cast<std::size_t>(c.code[i]);
    if (c.size[ci] == 1) {
      acc.add(0.0);
      continue;
    }
    const double a = sums[i * c.count + ci] / static_cast<double>(c.size[ci] - 1);
    double b = kInf;
    for (std::size_t k = 0; k < c.count; ++k) {
      if (k != ci) b = std::min(b, sums[i * c.count + k] / static_cast<double>(c.size[k]));
    }
    const double m = std::max(a, b);
    acc.add(m > 0.0 ? (b - a) / m : 0.0);
  }
  return acc.value() / static_cast<double>(coords.size());
}

double chaos(std::span<const Point2> coords, const Labeling& labels) {
  const auto c = compact(coords, labels);
  ExactAccumulator acc;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    double best = kInf;
    for (std::size_t j = 0; j < coords.size(); ++j) {
      if (j != i && c.code[j] == c.code[i]) best = std::min(best, squared_distance(coords[i], coords[j]));
    }
    if (best < kInf) acc.add(std::sqrt(best));
  }
  return acc.value() / static_cast<double>(coords.size());
}

double pas(std::span<const Point2> coords, const Labeling& labels) {
  if (coords.size() != labels.size()) throw MetricError("coordinates and labels differ in length");
  if (coords.size() <= 10) throw MetricError("PAS needs more than 10 spots");
  const auto nn = knn_lists(coords, 10);
  std::size_t abnormal = 0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    std::size_t differ = 0;
    for (std::size_t j : nn[i]) differ += labels.codes()[j] != labels.codes()[i];
    abnormal += differ >= 6;
  }
  return static_cast<double>(abnormal) / static_cast<double>(coords.size());
}

double ch_index(std::span<const Point2> coords, const Labeling& labels) {
  const auto c = compact(coords, labels);
  require_two_clusters(c, "CH index");
  const auto cent = centroids(coords, c);
  ExactAccumulator gx;
  ExactAccumulator gy;
  for (const auto& p : coords) {
    gx.add(p.x);
    gy.add(p.y);
  }
  const double N = static_cast<double>(coords.size());
  const Point2 g{gx.value() / N, gy.value() / N};
  ExactAccumulator between;
  for (std::size_t k = 0; k < c.count; ++k) between.add(static_cast<double>(c.size[k]) * squared_distance(cent[k], g));
  ExactAccumulator within;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    within.add(squared_distance(coords[i], cent[static_cast<std::size_t>(c.code[i])]));
  }
  const double w = within.value();
  if (w == 0.0) return 1.0;
  const double K = static_cast<double>(c.count);
  return between.value() * (N - K) / (w * (K - 1.0));
}

double db_index(std::span<const Point2> coords, const Labeling& labels) {
  const auto c = compact(coords, labels);
  require_two_clusters(c, "DB index");
  const auto cent = centroids(coords, c);
  std::vector<ExactAccumulator> spread(c.count);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const auto k = static_cast<std::size_t>(c.code[i]);
    spread[k].add(std::sqrt(squared_distance(coords[i], cent[k])));
  }
  std::vector<double> s(c.count);
  for (std::size_t k = 0; k < c.count; ++k) s[k] = spread[k].value() / static_cast<double>(c.size[k]);
  ExactAccumulator acc;
  for (std::size_t i = 0; i < c.count; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < c.count; ++j) {
      if (j == i) continue;
      const double d = std::sqrt(squared_distance(cent[i], cent[j]));
      if (d > 0.0) worst = std::max(worst, (s[i] + s[j]) / d);
    }
    acc.add(worst);
  }
  return acc.value() / static_cast<double>(c.count);
}

std::vector<MetricValue> benchmark_scores(std::span<const Point2> coords, const Labeling& truth, const Labeling& pred,
                                          bool supervised_ok, const Labeling* matched) {
  std::vector<MetricValue> out;
  const auto guarded = [&](const std::string& name, auto fn) {
    try {
      out.push_back({name, fn(), ""});
    } catch (const MetricError& e) {
      out.push_back({name, std::nullopt, e.what()});
    }
  };
  if (supervised_ok) {
    const auto space = union_space(truth.label_space(), pred.label_space());
    const auto s = supervised_scores(truth.with_space(space), pred.with_space(space));
    out.push_back({"accuracy", s.accuracy, ""});
    out.push_back({"precision", s.precision, ""});
    out.push_back({"recall", s.recall, ""});
    out.push_back({"f1", s.f1, ""});
  } else {
    for (const char* n : {"accuracy", "precision", "recall", "f1"}) {
      out.push_back({n, std::nullopt, "label spaces differ before matching"});
    }
  }
  guarded("nmi", [&] { return nmi(truth, pred); });
  guarded("ari", [&] { return ari(truth, pred); });
  guarded("jaccard", [&] { return jaccard_score(truth, matched ? *matched : pred); });
  guarded("v_measure", [&] { return v_measure(truth, pred); });
  guarded("fmi", [&] { return fmi(truth, pred); });
  guarded("chaos", [&] { return chaos(coords, pred); });
  guarded("pas", [&] { return pas(coords, pred); });
  guarded("asw", [&] { return asw(coords, pred); });
  guarded("ch", [&] { return ch_index(coords, pred); });
  guarded("db", [&] { return db_index(coords, pred); });
  return out;
}

}  // namespace slam
