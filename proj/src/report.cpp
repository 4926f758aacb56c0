#include "slam/report.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "slam/harness.hpp"
#include "slam/io.hpp"

namespace slam {

using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kFormat = "slam-report/1";

ojson optional_number(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::string family_name(MetricFamily f) {
  switch (f) {
    case MetricFamily::Slam: return "slam";
    case MetricFamily::Supervised: return "supervised";
    case MetricFamily::External: return "external";
    case MetricFamily::Internal: return "internal";
  }
  return "unknown";
}

ojson score_json(const std::string& name, const std::optional<double>& value, const std::string& note) {
  const auto& d = metric_descriptor(name);
  ojson j;
  j["metric"] = name;
  j["value"] = optional_number(value);
  j["family"] = family_name(d.family);
  j["range"] = d.range_text();
  j["direction"] = d.direction == Direction::HigherBetter ? "higher-better" : "lower-better";
  if (!note.empty()) j["note"] = note;
  return j;
}

std::string short_number(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::optional<double> score_of(const LabelingReport& l, const std::string& metric) {
  if (metric == "slam") return l.slam.d;
  for (const auto& b : l.benchmarks) {
    if (b.name == metric) return b.value;
  }
  return std::nullopt;
}

}  // namespace

EvaluationReport evaluate_labelings(const SpatialDataset& dataset, const std::string& dataset_source,
                                    const Labeling& truth, const std::string& truth_source,
                                    const std::vector<NamedLabeling>& predicted, const EvaluationConfig& config,
                                    const std::vector<QPair>& pairs, Exec exec) {
  EvaluationReport r;
  r.config = config;
  r.dataset_source = dataset_source;
  r.spots = dataset.size();
  r.attribute_dim = dataset.attribute_dim();
  r.truth_source = truth_source;
  r.truth_space = truth.label_space();

  const SlamEvaluator ev(dataset, truth, config, exec);
  r.num_edges = ev.graph().num_edges();
  r.graph_seconds = ev.graph_seconds();

  for (const auto& p : predicted) {
    LabelingReport l;
    l.name = p.name;
    l.source = p.source;
    l.slam = ev.score(p.labels);
    l.supervised = shares_vocabulary(truth, p.labels);
    if (!l.supervised) l.notices.push_back("supervised metrics skipped: label spaces differ before matching");
    if (l.slam.matched) l.notices.push_back("predicted labels were mapped onto the truth label space");
    if (!config.similarity_mode && !dataset.has_attributes()) {
      l.notices.push_back("no spot attributes: every edge weighted 1 (unweighted similarity)");
    }
    l.benchmarks = benchmark_scores(dataset.coords(), truth, p.labels, l.supervised,
                                    l.slam.match ? &l.slam.match->matched : nullptr);
    r.labelings.push_back(std::move(l));
  }

  for (const auto& pr : pairs) {
    if (pr.more >= r.labelings.size() || pr.less >= r.labelings.size()) {
      throw HarnessError("Q pair refers to a labeling that was not given");
    }
    const auto& a = r.labelings[pr.more];
    const auto& b = r.labelings[pr.less];
    for (const auto& d : metric_catalog()) {
      const auto s1 = score_of(a, d.name);
      const auto s2 = score_of(b, d.name);
      if (!s1 || !s2) continue;
      QEntry e{a.name, b.name, d.name, *s1, *s2, std::nullopt, ""};
      try {
        e.q = q_coefficient(d, *s1, *s2);
      } catch (const HarnessError& err) {
        e.note = err.what();
      }
      r.q.push_back(std::move(e));
    }
  }
  return r;
}

std::string report_json(const EvaluationReport& r, bool with_timings) {
  ojson j;
  j["format"] = kFormat;
  j["seed"] = r.config.rng_seed;
  j["config"] = ojson::parse(config_to_json(r.config));
  j["dataset"] = {{"source", r.dataset_source}, {"spots", r.spots}, {"attribute_dim", r.attribute_dim}};
  j["truth"] = {{"source", r.truth_source}, {"label_space", r.truth_space}};
  j["graph"] = {{"k_neighbors", r.config.k_neighbors}, {"edges", r.num_edges}};
  j["metrics"] = ojson::parse(catalog_json());

  ojson labelings = ojson::array();
  for (const auto& l : r.labelings) {
    ojson e;
    e["name"] = l.name;
    e["source"] = l.source;
    e["label_space"] = l.slam.label_space;
    e["matched"] = l.slam.matched;
    if (l.slam.match) {
      ojson assign = ojson::object();
      for (const auto& [from, to] : l.slam.match->assignment) assign[from] = to;
      e["assignment"] = std::move(assign);
      ojson splits = ojson::array();
      for (const auto& s : l.slam.match->splits) {
        splits.push_back({{"source", s.source}, {"target", s.target}, {"spots", s.spots.size()}});
      }
      e["splits"] = std::move(splits);
    } else {
      e["assignment"] = nullptr;
      e["splits"] = ojson::array();
    }
    e["slam_details"] = {{"K", l.slam.K},
                         {"edges", l.slam.num_edges},
                         {"z_rows_truth", l.slam.z_rows_truth},
                         {"z_rows_pred", l.slam.z_rows_pred},
                         {"projections", l.slam.projections_used}};
    ojson scores = ojson::array();
    scores.push_back(score_json("slam", l.slam.d, ""));
    for (const auto& b : l.benchmarks) scores.push_back(score_json(b.name, b.value, b.note));
    e["scores"] = std::move(scores);
    e["notices"] = l.notices;
    if (with_timings) {
      e["timings"] = {{"matching", l.slam.timings.matching},
                      {"attributes", l.slam.timings.attributes},
                      {"sampling", l.slam.timings.sampling},
                      {"discrepancy", l.slam.timings.discrepancy}};
    }
    labelings.push_back(std::move(e));
  }
  j["labelings"] = std::move(labelings);

  ojson q = ojson::array();
  for (const auto& e : r.q) {
    ojson row{{"more", e.more}, {"less", e.less}, {"metric", e.metric},
              {"s1", e.s1}, {"s2", e.s2}, {"q", optional_number(e.q)}};
    if (!e.note.empty()) row["note"] = e.note;
    q.push_back(std::move(row));
  }
  j["q"] = std::move(q);
  if (with_timings) j["timings"] = {{"graph", r.graph_seconds}};
  return j.dump(2) + "\n";
}

void write_report_table(std::ostream& out, const EvaluationReport& r) {
  out << "metric      range        dir";
  for (const auto& l : r.labelings) out << "  " << std::setw(14) << l.name;
  out << '\n';
  for (const auto& d : metric_catalog()) {
    out << std::left << std::setw(12) << d.name << std::setw(13) << d.range_text()
        << (d.direction == Direction::HigherBetter ? "up " : "dn ") << std::right;
    for (const auto& l : r.labelings) {
      const auto v = score_of(l, d.name);
      out << "  " << std::setw(14) << (v ? short_number(*v) : std::string("-"));
    }
    out << '\n';
  }
  if (!r.q.empty()) {
    out << "\nQ coefficients\n";
    for (const auto& e : r.q) {
      out << "  " << e.more << " vs " << e.less << "  " << std::left << std::setw(10) << e.metric << std::right << ' '
          << (e.q ? format_double(*e.q) : "n/a (" + e.note + ")") << '\n';
    }
  }
  for (const auto& l : r.labelings) {
    for (const auto& n : l.notices) out << "note [" << l.name << "]: " << n << '\n';
  }
}

}  // namespace slam
