#include "slam/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>

#include "slam/discrepancy.hpp"
#include "slam/io.hpp"
#include "slam/numeric.hpp"

namespace slam {

double q_coefficient(const MetricDescriptor& metric, double s1, double s2) {
  if (!std::isfinite(s1) || !std::isfinite(s2)) throw HarnessError("Q needs finite scores");
  double r = 0.0;
  if (metric.lower && metric.upper) {
    r = *metric.upper - *metric.lower;
  } else if (metric.lower) {
    r = s1 - *metric.lower;
  } else if (metric.upper) {
    r = *metric.upper - s2;
  } else {
    r = std::max(std::abs(s1), std::abs(s2));
  }
  if (r == 0.0) throw HarnessError("Q range is zero for metric '" + metric.name + "'");
  const double sign = metric.direction == Direction::HigherBetter ? -1.0 : 1.0;
  return sign * (s1 - s2) / r + 0.0;  // no negative zero
}

CaseId parse_case_id(std::string_view s) {
  static const char* roman[] = {"I", "II", "III", "IV", "V", "VI"};
  for (int i = 0; i < 6; ++i) {
    if (s == roman[i] || s == std::to_string(i + 1)) return static_cast<CaseId>(i + 1);
  }
  throw HarnessError("unknown case '" + std::string(s) + "' (expected I..VI)");
}

std::string to_string(CaseId id) {
  static const char* roman[] = {"I", "II", "III", "IV", "V", "VI"};
  return roman[static_cast<int>(id) - 1];
}

const std::vector<std::size_t>& case2_counts() {
  static const std::vector<std::size_t> counts = {9, 19, 28, 38, 47, 57, 66, 76, 85, 95};
  return counts;
}

namespace {

// Square lattice with unit spacing, centred on x = 0. Spots are ordered by
// (y, |x|, x) so that the x-mirror maps index order onto itself.
std::vector<Point2> centred_lattice(int cols, int rows) {
  std::vector<Point2> pts;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) pts.push_back({c - (cols - 1) / 2.0, static_cast<double>(r)});
  }
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    if (a.y != b.y) return a.y < b.y;
    if (std::abs(a.x) != std::abs(b.x)) return std::abs(a.x) < std::abs(b.x);
    return a.x < b.x;
  });
  return pts;
}

std::vector<std::string> spot_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("s" + std::to_string(i));
  return ids;
}

std::size_t find_spot(const std::vector<Point2>& pts, double x, double y) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].x == x && pts[i].y == y) return i;
  }
  throw HarnessError("lattice has no spot at requested position");
}

EvaluationConfig lattice_config() {
  EvaluationConfig c;
  c.k_neighbors = 4;  // the 4-neighbourhood of a square lattice
  return c;
}

std::size_t count_diff(const Labeling& a, const Labeling& b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += a.labels()[i] != b.labels()[i];
  return n;
}

void finish(CaseInstance& c) {
  for (const auto& l : c.labelings) c.mislabels.push_back(count_diff(c.truth, l));
  c.params["k_neighbors"] = std::to_string(c.config.k_neighbors);
  c.params["spots"] = std::to_string(c.dataset.size());
}

CaseInstance case_one(std::uint64_t seed) {
  const auto pts = centred_lattice(6, 6);
  const std::vector<std::string> space = {"A", "B"};
  std::vector<std::string> truth(pts.size(), "A");
  std::vector<std::string> one = truth;
  std::vector<std::string> two = truth;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].x >= -0.5) one[i] = "B";  // 24 rightmost
    if (pts[i].x <= -1.5) two[i] = "B";  // 12 leftmost
  }
  CaseInstance c{CaseId::I,
                 seed,
                 SpatialDataset(spot_ids(pts.size()), pts),
                 Labeling(truth, LabelRole::GroundTruth, space),
                 {Labeling(one, LabelRole::Predicted, space), Labeling(two, LabelRole::Predicted, space)},
                 {"labeling_I", "labeling_II"},
                 {},
                 lattice_config(),
                 {{"layout", "6x6 lattice, truth all A"}}};
  finish(c);
  return c;
}

CaseInstance case_two(std::uint64_t seed) {
  const auto pts = centred_lattice(20, 18);
  const std::vector<std::string> space = {"A", "B"};
  std::vector<std::string> truth(pts.size());
  std::vector<std::size_t> a_spots;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    truth[i] = pts[i].x < 0 ? "A" : "B";
    if (pts[i].x < 0) a_spots.push_back(i);
  }
  Rng rng(mix_seed(seed, stream::generator));
  std::shuffle(a_spots.begin(), a_spots.end(), rng);
  CaseInstance c{CaseId::II, seed, SpatialDataset(spot_ids(pts.size()), pts),
                 Labeling(truth, LabelRole::GroundTruth, space), {}, {}, {}, lattice_config(),
                 {{"layout", "20x18 lattice, A left half, B right half"}}};
  for (std::size_t step = 0; step < case2_counts().size(); ++step) {
    auto labels = truth;
    for (std::size_t j = 0; j < case2_counts()[step]; ++j) labels[a_spots[j]] = "B";
    c.labelings.emplace_back(labels, LabelRole::Predicted, space);
    c.names.push_back("step_" + std::to_string(step + 1));
  }
  std::string counts;
  for (auto v : case2_counts()) counts += (counts.empty() ? "" : ";") + std::to_string(v);
  c.params["mislabel_counts"] = counts;
  finish(c);
  return c;
}

CaseInstance case_three(std::uint64_t seed) {
  const auto pts = centred_lattice(6, 5);
  const std::vector<std::string> space = {"normal", "tumor"};
  // A roughly circular tumor of 15 spots centred on the lattice.
  const auto in_tumor = [](const Point2& p) {
    const double ax = std::abs(p.x);
    if (p.y >= 1.0 && p.y <= 3.0) return ax <= 1.5;
    if (p.y == 0.0) return ax == 0.5;
    return p.x == -0.5;
  };
  std::vector<std::string> truth(pts.size(), "normal");
  double cx = 0.0;
  double cy = 0.0;
  std::size_t n_tumor = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!in_tumor(pts[i])) continue;
    truth[i] = "tumor";
    cx += pts[i].x;
    cy += pts[i].y;
    ++n_tumor;
  }
  cx /= static_cast<double>(n_tumor);
  cy /= static_cast<double>(n_tumor);
  std::vector<double> dist(pts.size(), 0.0);
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (truth[i] != "tumor") continue;
    dist[i] = std::hypot(pts[i].x - cx, pts[i].y - cy);
    dmin = std::min(dmin, dist[i]);
    dmax = std::max(dmax, dist[i]);
  }
  // Certainty falls linearly from 1.0 at the centre to 0.5 at the rim.
  AttributeMatrix attr{pts.size(), 2, std::vector<double>(pts.size() * 2)};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double cert = truth[i] == "tumor" ? 1.0 - 0.5 * (dist[i] - dmin) / (dmax - dmin) : 0.0;
    attr.values[i * 2] = cert;
    attr.values[i * 2 + 1] = 1.0 - cert;
  }
  auto core = truth;
  auto edge = truth;
  // Core spots have four tumor neighbours; edge spots touch the normal region.
  const double core_sites[3][2] = {{-0.5, 3}, {0.5, 2}, {-0.5, 1}};
  const double edge_sites[3][2] = {{-0.5, 4}, {1.5, 3}, {-1.5, 1}};
  for (const auto& s : core_sites) core[find_spot(pts, s[0], s[1])] = "normal";
  for (const auto& s : edge_sites) edge[find_spot(pts, s[0], s[1])] = "normal";
  CaseInstance c{CaseId::III, seed, SpatialDataset(spot_ids(pts.size()), pts, std::move(attr)),
                 Labeling(truth, LabelRole::GroundTruth, space),
                 {Labeling(core, LabelRole::Predicted, space), Labeling(edge, LabelRole::Predicted, space)},
                 {"labeling_I", "labeling_II"}, {}, lattice_config(),
                 {{"layout", "6x5 lattice, circular tumor of 15 spots inside normal tissue"},
                  {"attributes", "(certainty, 1-certainty), certainty 1.0 at the tumor centre to 0.5 at its rim"}}};
  finish(c);
  return c;
}

CaseInstance case_four(std::uint64_t seed) {
  const auto pts = centred_lattice(10, 10);
  const std::vector<std::string> space = {"cancer", "normal"};
  std::vector<std::string> truth(pts.size(), "normal");
  // Dispersed: every interior cell of one checkerboard colour plus eight
  // random non-corner border cells of that colour; no two are adjacent.
  std::vector<std::size_t> interior;
  std::vector<std::size_t> border;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int c = static_cast<int>(pts[i].x + 4.5);
    const int r = static_cast<int>(pts[i].y);
    if ((c + r) % 2 != 0) continue;
    const bool on_x = c == 0 || c == 9;
    const bool on_y = r == 0 || r == 9;
    if (on_x && on_y) continue;
    (on_x || on_y ? border : interior).push_back(i);
  }
  Rng rng(mix_seed(seed, stream::generator));
  // The interior cells are centred on the lattice; redraw border picks that
  // also balance out, since a centred cancer class leaves CH at exactly 0.
  const auto centred = [&] {
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = 0; j < 8; ++j) {
      sx += pts[border[j]].x;
      sy += pts[border[j]].y - 4.5;
    }
    return sx == 0.0 && sy == 0.0;
  };
  do {
    std::shuffle(border.begin(), border.end(), rng);
  } while (centred());
  auto dispersed = truth;
  for (auto i : interior) dispersed[i] = "cancer";
  for (std::size_t j = 0; j < 8; ++j) dispersed[border[j]] = "cancer";
  // Aggregated: a 4-column band along one side.
  auto aggregated = truth;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i].x < -1.0) aggregated[i] = "cancer";
  }
  CaseInstance c{CaseId::IV, seed, SpatialDataset(spot_ids(pts.size()), pts),
                 Labeling(truth, LabelRole::GroundTruth, space),
                 {Labeling(dispersed, LabelRole::Predicted, space), Labeling(aggregated, LabelRole::Predicted, space)},
                 {"labeling_I", "labeling_II"}, {}, lattice_config(),
                 {{"layout", "10x10 lattice, truth all normal"}}};
  finish(c);
  return c;
}

CaseInstance case_five(std::uint64_t seed) {
  const auto pts = centred_lattice(6, 5);
  const std::vector<std::string> space = {"cancer", "normal"};
  const std::size_t g = 17;
  std::vector<std::string> truth(pts.size());
  AttributeMatrix attr{pts.size(), g, std::vector<double>(pts.size() * g, 0.0)};
  std::size_t next_normal = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double* row = attr.values.data() + i * g;
    if (pts[i].x > 0) {
      truth[i] = "cancer";
      row[g - 1] = 1.0;  // one shared cancer profile
    } else {
      truth[i] = "normal";
      // Shared component plus a private one: cosine 0.5 between any two.
      row[0] = 1.0;
      row[1 + next_normal++] = 1.0;
    }
  }
  auto fn = truth;
  auto fp = truth;
  const double sites[6][2] = {{2.5, 0}, {1.5, 1}, {2.5, 2}, {1.5, 3}, {2.5, 4}, {0.5, 2}};
  for (const auto& s : sites) {
    fn[find_spot(pts, s[0], s[1])] = "normal";
    fp[find_spot(pts, -s[0], s[1])] = "cancer";
  }
  CaseInstance c{CaseId::V, seed, SpatialDataset(spot_ids(pts.size()), pts, std::move(attr)),
                 Labeling(truth, LabelRole::GroundTruth, space),
                 {Labeling(fn, LabelRole::Predicted, space), Labeling(fp, LabelRole::Predicted, space)},
                 {"labeling_I", "labeling_II"}, {}, lattice_config(),
                 {{"layout", "6x5 lattice, normal x<0, cancer x>0; FN and FP sites mirror each other"},
                  {"attributes", "cancer identical, normal pairwise cosine 0.5, cross cosine 0"}}};
  finish(c);
  return c;
}

CaseInstance case_six(std::uint64_t seed) {
  const auto pts = centred_lattice(6, 5);
  const std::vector<std::string> space = {"adipose", "cancer", "gland"};
  const std::size_t g = 50;
  const double ca = 0.791;
  const double cc = 0.673;
  // Adipose on the left, cancer mirrored on the right. Gland spots wall off
  // the outer-column spots at even rows, so those touch only gland.
  const auto is_gland = [](const Point2& p) {
    const double ax = std::abs(p.x);
    const bool odd = static_cast<int>(p.y) % 2 == 1;
    return (ax == 2.5 && odd) || (ax == 1.5 && !odd);
  };
  std::vector<std::string> truth(pts.size());
  AttributeMatrix attr{pts.size(), g, std::vector<double>(pts.size() * g, 0.0)};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double* row = attr.values.data() + i * g;
    if (is_gland(pts[i])) {
      truth[i] = "gland";
      row[0] = 1.0;
    } else if (pts[i].x < 0) {
      truth[i] = "adipose";
      row[0] = ca;
      row[1] = std::sqrt(1.0 - ca * ca);
    } else {
      truth[i] = "cancer";
      row[0] = cc;
      row[1] = -std::sqrt(1.0 - cc * cc);
    }
  }
  auto cancer_flip = truth;
  auto adipose_flip = truth;
  for (double y : {0.0, 2.0, 4.0}) {
    cancer_flip[find_spot(pts, 2.5, y)] = "gland";
    adipose_flip[find_spot(pts, -2.5, y)] = "gland";
  }
  CaseInstance c{CaseId::VI, seed, SpatialDataset(spot_ids(pts.size()), pts, std::move(attr)),
                 Labeling(truth, LabelRole::GroundTruth, space),
                 {Labeling(cancer_flip, LabelRole::Predicted, space),
                  Labeling(adipose_flip, LabelRole::Predicted, space)},
                 {"labeling_II", "labeling_I"}, {}, lattice_config(),
                 {{"layout", "6x5 lattice, adipose left, cancer right, gland spots enclosing the flipped sites"},
                  {"attributes", "gland (1,0), adipose cos 0.791, cancer cos 0.673, padded to 50 dims"}}};
  finish(c);
  return c;
}

}  // namespace

CaseInstance generate_case(CaseId id, std::uint64_t seed) {
  switch (id) {
    case CaseId::I: return case_one(seed);
    case CaseId::II: return case_two(seed);
    case CaseId::III: return case_three(seed);
    case CaseId::IV: return case_four(seed);
    case CaseId::V: return case_five(seed);
    case CaseId::VI: return case_six(seed);
  }
  throw HarnessError("unknown case id");
}

std::vector<QRow> case_q_table(const CaseInstance& c, const EvaluationConfig& config, std::size_t more,
                               std::size_t less) {
  if (more >= c.labelings.size() || less >= c.labelings.size()) throw HarnessError("labeling index out of range");
  const auto& coords = c.dataset.coords();
  SlamEvaluator ev(c.dataset, c.truth, config);
  const auto& l1 = c.labelings[more];
  const auto& l2 = c.labelings[less];
  std::vector<QRow> rows;
  const auto add = [&](const std::string& name, double s1, double s2) {
    rows.push_back({name, s1, s2, q_coefficient(metric_descriptor(name), s1, s2)});
  };
  add("slam", ev.score(l1).d, ev.score(l2).d);
  const bool sup1 = shares_vocabulary(c.truth, l1);
  const bool sup2 = shares_vocabulary(c.truth, l2);
  const auto b1 = benchmark_scores(coords, c.truth, l1, sup1);
  const auto b2 = benchmark_scores(coords, c.truth, l2, sup2);
  for (std::size_t i = 0; i < b1.size(); ++i) {
    if (b1[i].value && b2[i].value) add(b1[i].name, *b1[i].value, *b2[i].value);
  }
  return rows;
}

std::vector<SensitivityRow> sensitivity_sweep(const std::vector<double>& h_values, const CaseInstance& base,
                                              const EvaluationConfig& config) {
  std::vector<double> hs = h_values;
  std::sort(hs.begin(), hs.end());
  for (double h : hs) {
    if (!(h > 0.0) || h > 10.0) throw HarnessError("bandwidth values must lie in (0, 10]");
  }
  std::vector<SensitivityRow> rows;
  const double n = static_cast<double>(base.dataset.size());
  for (double h : hs) {
    EvaluationConfig cfg = config;
    cfg.bandwidth_h = h;
    SlamEvaluator ev(base.dataset, base.truth, cfg);
    for (std::size_t s = 0; s < base.labelings.size(); ++s) {
      const std::size_t mis = s < base.mislabels.size() ? base.mislabels[s] : 0;
      rows.push_back({h, s + 1, mis, static_cast<double>(mis) / n, ev.score(base.labelings[s]).d});
    }
  }
  return rows;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw HarnessError("Spearman needs two equal-length series");
  const auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mx = exact_mean(rx);
  const double my = exact_mean(ry);
  ExactAccumulator sxy;
  ExactAccumulator sxx;
  ExactAccumulator syy;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy.add((rx[i] - mx) * (ry[i] - my));
    sxx.add((rx[i] - mx) * (rx[i] - mx));
    syy.add((ry[i] - my) * (ry[i] - my));
  }
  if (sxx.value() == 0.0 || syy.value() == 0.0) return 0.0;
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

namespace {

// n spots on a near-square lattice, labels in K vertical bands, then half
// the spots relabelled at random to a different band.
ComplexityRow timed_cell(const std::string& axis, std::size_t n, std::size_t K, const EvaluationConfig& config) {
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  std::vector<Point2> pts;
  std::vector<std::string> truth;
  std::vector<std::string> space;
  for (std::size_t k = 0; k < K; ++k) space.push_back(std::to_string(k + 1));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % cols;
    pts.push_back({static_cast<double>(c), static_cast<double>(i / cols)});
    truth.push_back(space[std::min(K - 1, c * K / cols)]);
  }
  Rng rng(mix_seed(config.rng_seed ^ (n * 1315423911ULL + K), stream::generator));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  auto pred = truth;
  if (K > 1) {
    std::uniform_int_distribution<std::size_t> shift(1, K - 1);
    for (std::size_t j = 0; j < n / 2; ++j) {
      const std::size_t i = order[j];
      const std::size_t cur = static_cast<std::size_t>(std::stoul(pred[i])) - 1;
      pred[i] = space[(cur + shift(rng)) % K];
    }
  }
  SpatialDataset ds(spot_ids(n), pts);
  const Labeling t(truth, LabelRole::GroundTruth, space);
  const Labeling p(pred, LabelRole::Predicted, space);
  const auto t0 = std::chrono::steady_clock::now();
  const double d = slam_score(t, p, ds, config).d;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {axis, n, K, secs, d};
}

}  // namespace

std::vector<ComplexityRow> complexity_sweep(const std::vector<std::size_t>& spot_counts,
                                            const std::vector<std::size_t>& label_counts, const EvaluationConfig& config,
                                            std::size_t n_for_label_sweep) {
  std::vector<ComplexityRow> rows;
  auto ns = spot_counts;
  std::sort(ns.begin(), ns.end());
  auto ks = label_counts;
  std::sort(ks.begin(), ks.end());
  for (auto n : ns) {
    if (n == 0) throw HarnessError("spot counts must be positive");
    rows.push_back(timed_cell("n", n, 2, config));
  }
  for (auto k : ks) {
    if (k == 0) throw HarnessError("label counts must be positive");
    rows.push_back(timed_cell("K", n_for_label_sweep, k, config));
  }
  return rows;
}

void write_sensitivity_csv(std::ostream& out, const std::vector<SensitivityRow>& rows) {
  out << "h,step,mislabels,error_rate,slam\n";
  for (const auto& r : rows) {
    out << format_double(r.h) << ',' << r.step << ',' << r.mislabels << ',' << format_double(r.error_rate) << ','
        << format_double(r.d) << '\n';
  }
}

void write_complexity_csv(std::ostream& out, const std::vector<ComplexityRow>& rows) {
  out << "axis,n,K,seconds,slam\n";
  for (const auto& r : rows) {
    out << r.axis << ',' << r.n << ',' << r.K << ',' << format_double(r.seconds) << ',' << format_double(r.d) << '\n';
  }
}

}  // namespace slam
