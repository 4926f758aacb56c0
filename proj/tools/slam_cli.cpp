// slam: command-line front end for the spatial labeling evaluation pipeline.
//
// Exit codes: 0 success, 1 pipeline or I/O error, 2 usage error.

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slam/attributes.hpp"
#include "slam/discrepancy.hpp"
#include "slam/graph.hpp"
#include "slam/harness.hpp"
#include "slam/io.hpp"
#include "slam/metrics.hpp"
#include "slam/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kPipeline = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flags that override fields of EvaluationConfig. Unset flags leave the
// config file (or the built-in defaults) alone.
struct ConfigFlags {
  std::string config_path;
  std::optional<int> k;
  std::optional<double> bandwidth;
  std::optional<double> gamma;
  std::optional<int> num_samples;
  std::optional<int> batch_size;
  std::optional<int> num_projections;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> estimator;
  std::optional<std::string> similarity;
  std::optional<std::string> zero_rows;
  std::optional<std::string> match;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
    app->add_option("--k", k, "neighbours per spot for the mutual k-NN graph");
    app->add_option("--bandwidth", bandwidth, "KDE bandwidth h");
    app->add_option("--gamma", gamma, "Gaussian kernel gamma");
    app->add_option("--num-samples", num_samples, "sampled distributions per side");
    app->add_option("--batch-size", batch_size, "points per sampled distribution");
    app->add_option("--num-projections", num_projections, "sliced-Wasserstein projections");
    app->add_option("--seed", seed, "RNG seed (default 42)");
    app->add_option("--estimator", estimator, "standard-biased | paper-verbatim");
    app->add_option("--similarity", similarity, "auto | cosine-clamped | constant-one");
    app->add_option("--zero-rows", zero_rows, "keep | drop");
    app->add_option("--match", match, "auto | always | never");
  }

  slam::EvaluationConfig resolve(slam::EvaluationConfig base = {}) const {
    slam::EvaluationConfig c = base;
    if (!config_path.empty()) {
      try {
        c = slam::load_config(config_path, base);
      } catch (const slam::Error& e) {
        throw slam::SlamError("config", config_path + ": " + e.what());
      }
    }
    if (k) c.k_neighbors = *k;
    if (bandwidth) c.bandwidth_h = *bandwidth;
    if (gamma) c.gamma = *gamma;
    if (num_samples) c.num_samples = *num_samples;
    if (batch_size) c.batch_size = *batch_size;
    if (num_projections) c.num_projections = *num_projections;
    if (seed) c.rng_seed = *seed;
    try {
      if (estimator) c.mmd_estimator = slam::parse_estimator(*estimator);
      if (similarity) {
        c.similarity_mode = *similarity == "auto" ? std::nullopt
                                                  : std::optional(slam::parse_similarity(*similarity));
      }
      if (zero_rows) c.zero_rows = slam::parse_zero_rows(*zero_rows);
      if (match) c.match = slam::parse_match_policy(*match);
      c.validate();
    } catch (const slam::ConfigError& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what) {
  std::vector<T> out;
  for (const auto& item : split_list(s)) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_same_v<T, double>) {
        out.push_back(std::stod(item, &used));
      } else {
        const long long v = std::stoll(item, &used);
        if (v <= 0) throw std::invalid_argument("non-positive");
        out.push_back(static_cast<T>(v));
      }
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw UsageError(std::string("bad value '") + item + "' in " + what);
    }
  }
  return out;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw slam::Error("cannot write '" + p.string() + "'");
  return f;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  auto f = open_out(out_path);
  f << text;
  if (!f) throw slam::Error("failed writing '" + out_path + "'");
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
  ConfigFlags cfg;
  std::string dataset;
  std::string truth;
  std::vector<std::string> preds;
  std::vector<std::string> q_pairs;
  std::string out;
  std::string csv;
  std::string export_edges;
  std::string export_z;
  bool pretty = false;
  bool timings = false;
  bool serial = false;
};

std::size_t resolve_labeling_ref(const std::string& ref, const std::vector<slam::NamedLabeling>& preds) {
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].name == ref) return i;
  }
  try {
    std::size_t used = 0;
    const long long v = std::stoll(ref, &used);
    if (used == ref.size() && v >= 1 && static_cast<std::size_t>(v) <= preds.size()) {
      return static_cast<std::size_t>(v - 1);
    }
  } catch (const std::exception&) {
  }
  throw UsageError("--q-pair refers to unknown labeling '" + ref + "'");
}

int run_evaluate(const EvaluateArgs& a) {
  const auto config = a.cfg.resolve();
  const auto exec = a.serial ? slam::Exec::Serial : slam::Exec::Parallel;
  std::optional<slam::SpatialDataset> loaded;
  std::optional<slam::Labeling> loaded_truth;
  std::vector<slam::NamedLabeling> preds;
  std::map<std::string, int> seen;
  std::string current = a.dataset;
  try {
    loaded = slam::load_dataset(a.dataset);
    current = a.truth;
    loaded_truth = slam::load_labeling(a.truth, *loaded, slam::LabelRole::GroundTruth);
    for (const auto& p : a.preds) {
      current = p;
      std::string name = fs::path(p).stem().string();
      if (seen[name]++ > 0) name += "_" + std::to_string(seen[name]);
      preds.push_back({name, p, slam::load_labeling(p, *loaded)});
    }
  } catch (const slam::Error& e) {
    throw slam::SlamError("input", current + ": " + e.what());
  }
  const auto& dataset = *loaded;
  const auto& truth = *loaded_truth;

  std::vector<slam::QPair> pairs;
  for (const auto& spec : a.q_pairs) {
    const auto parts = split_list(spec);
    if (parts.size() != 2) throw UsageError("--q-pair expects MORE,LESS");
    pairs.push_back({resolve_labeling_ref(parts[0], preds), resolve_labeling_ref(parts[1], preds)});
  }

  const auto report = slam::evaluate_labelings(dataset, a.dataset, truth, a.truth, preds, config, pairs, exec);
  emit(slam::report_json(report, a.timings), a.out);

  if (!a.csv.empty()) {
    auto f = open_out(a.csv);
    f << "labeling,metric,value\n";
    for (const auto& l : report.labelings) {
      f << l.name << ",slam," << slam::format_double(l.slam.d) << '\n';
      for (const auto& b : l.benchmarks) {
        f << l.name << ',' << b.name << ',' << (b.value ? slam::format_double(*b.value) : "") << '\n';
      }
    }
  }

  if (!a.export_edges.empty() || !a.export_z.empty()) {
    const slam::SlamEvaluator ev(dataset, truth, config, exec);
    if (!a.export_edges.empty()) {
      auto f = open_out(a.export_edges);
      slam::write_edges_csv(f, ev.graph());
    }
    if (!a.export_z.empty()) {
      fs::create_directories(a.export_z);
      for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto& res = report.labelings[i].slam;
        const auto& pred = res.match ? res.match->matched : preds[i].labels;
        auto ft = open_out(fs::path(a.export_z) / ("z_truth_" + preds[i].name + ".csv"));
        slam::write_z_csv(ft, ev.edge_matrix(truth.with_space(res.label_space)));
        auto fp = open_out(fs::path(a.export_z) / ("z_" + preds[i].name + ".csv"));
        slam::write_z_csv(fp, ev.edge_matrix(pred.with_space(res.label_space)));
      }
    }
  }

  if (a.pretty) slam::write_report_table(std::cerr, report);
  return kOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string case_id;
  std::uint64_t seed = 42;
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  slam::CaseId id;
  try {
    id = slam::parse_case_id(a.case_id);
  } catch (const slam::HarnessError& e) {
    throw UsageError(e.what());
  }
  const auto c = slam::generate_case(id, a.seed);
  std::error_code ec;
  fs::create_directories(a.out, ec);
  if (ec) throw slam::Error("cannot create '" + a.out + "': " + ec.message());
  const fs::path dir(a.out);
  slam::save_dataset(dir / "dataset.csv", c.dataset);
  slam::save_labeling(dir / "truth.csv", c.dataset, c.truth);
  for (std::size_t i = 0; i < c.labelings.size(); ++i) {
    slam::save_labeling(dir / (c.names[i] + ".csv"), c.dataset, c.labelings[i]);
  }
  std::cerr << "case " << slam::to_string(id) << ": " << c.dataset.size() << " spots, " << c.labelings.size()
            << " labelings written to " << a.out << "; evaluate with --k " << c.config.k_neighbors << '\n';
  return kOk;
}

// ---- sweep ----------------------------------------------------------------

struct SweepArgs {
  ConfigFlags cfg;
  std::string kind;
  std::string h_values = "0.001,0.01,0.05,0.1,0.5";
  std::string spot_counts;
  std::string label_counts;
  std::size_t n_for_k = 1000;
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  std::ostringstream csv;
  if (a.kind == "sensitivity") {
    const auto base = slam::generate_case(slam::CaseId::II, a.cfg.seed.value_or(42));
    const auto config = a.cfg.resolve(base.config);
    const auto hs = parse_list<double>(a.h_values, "--bandwidths");
    if (hs.empty()) throw UsageError("--bandwidths needs at least one value");
    std::vector<slam::SensitivityRow> rows;
    for (double h : hs) {
      std::cerr << "sensitivity: h = " << h << '\n';
      auto part = slam::sensitivity_sweep({h}, base, config);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.h < y.h; });
    slam::write_sensitivity_csv(csv, rows);
  } else if (a.kind == "complexity") {
    const auto config = a.cfg.resolve();
    auto ns = parse_list<std::size_t>(a.spot_counts, "--n");
    auto ks = parse_list<std::size_t>(a.label_counts, "--K");
    if (ns.empty() && ks.empty()) {
      ns = {1000, 2000, 5000, 10000};
      ks = {2, 5, 10, 15};
    }
    std::sort(ns.begin(), ns.end());
    std::sort(ks.begin(), ks.end());
    std::vector<slam::ComplexityRow> rows;
    for (auto n : ns) {
      auto part = slam::complexity_sweep({n}, {}, config, a.n_for_k);
      std::cerr << "complexity: n = " << n << " took " << part.front().seconds << " s\n";
      rows.insert(rows.end(), part.begin(), part.end());
    }
    for (auto k : ks) {
      auto part = slam::complexity_sweep({}, {k}, config, a.n_for_k);
      std::cerr << "complexity: K = " << k << " took " << part.front().seconds << " s\n";
      rows.insert(rows.end(), part.begin(), part.end());
    }
    slam::write_complexity_csv(csv, rows);
  } else {
    throw UsageError("unknown sweep kind '" + a.kind + "' (expected sensitivity or complexity)");
  }
  emit(csv.str(), a.out);
  return kOk;
}

// ---- qtable ---------------------------------------------------------------

struct QTableArgs {
  ConfigFlags cfg;
  std::string case_id;
  std::size_t more = 1;
  std::size_t less = 2;
  std::string out;
};

int run_qtable(const QTableArgs& a) {
  slam::CaseId id;
  try {
    id = slam::parse_case_id(a.case_id);
  } catch (const slam::HarnessError& e) {
    throw UsageError(e.what());
  }
  const auto c = slam::generate_case(id, a.cfg.seed.value_or(42));
  const auto config = a.cfg.resolve(c.config);
  if (a.more == 0 || a.less == 0 || a.more > c.labelings.size() || a.less > c.labelings.size()) {
    throw UsageError("--more/--less must index the case's labelings (1.." + std::to_string(c.labelings.size()) + ")");
  }
  nlohmann::ordered_json j;
  j["case"] = slam::to_string(id);
  j["seed"] = config.rng_seed;
  j["config"] = nlohmann::ordered_json::parse(slam::config_to_json(config));
  j["more"] = c.names[a.more - 1];
  j["less"] = c.names[a.less - 1];
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : slam::case_q_table(c, config, a.more - 1, a.less - 1)) {
    rows.push_back({{"metric", r.metric}, {"s1", r.s1}, {"s2", r.s2}, {"q", r.q}});
  }
  j["rows"] = std::move(rows);
  emit(j.dump(2) + "\n", a.out);
  return kOk;
}

void apply_thread_cap() {
  const char* env = std::getenv("SLAM_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw UsageError("SLAM_THREADS must be a positive integer");
  omp_set_num_threads(static_cast<int>(n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial labeling evaluation with SLAM and benchmark metrics"};
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "score predicted labelings against a ground truth");
  evaluate->add_option("--dataset", ev.dataset, "dataset CSV or JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--truth", ev.truth, "ground-truth labeling CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--pred", ev.preds, "predicted labeling CSV (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--q-pair", ev.q_pairs, "MORE,LESS: Q for a (more, less erroneous) pair by name or 1-based index");
  evaluate->add_option("--out", ev.out, "write the JSON report here instead of stdout");
  evaluate->add_option("--csv", ev.csv, "also write a labeling,metric,value table");
  evaluate->add_option("--export-edges", ev.export_edges, "write the mutual k-NN edge list");
  evaluate->add_option("--export-z", ev.export_z, "directory for edge attribute matrices");
  evaluate->add_flag("--pretty", ev.pretty, "print a score table to stderr");
  evaluate->add_flag("--timings", ev.timings, "include wall-clock stage timings in the report");
  evaluate->add_flag("--serial", ev.serial, "use the serial reference kernels");
  ev.cfg.attach(evaluate);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "write the dataset and labelings of a synthetic case");
  simulate->add_option("--case", sim.case_id, "I..VI")->required();
  simulate->add_option("--seed", sim.seed, "generator seed");
  simulate->add_option("--out", sim.out, "output directory")->required();

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "bandwidth sensitivity or runtime scaling table (CSV)");
  sweep->add_option("kind", sw.kind, "sensitivity | complexity")->required();
  sweep->add_option("--bandwidths", sw.h_values, "comma-separated bandwidths (sensitivity)");
  sweep->add_option("--n", sw.spot_counts, "comma-separated spot counts (complexity)");
  sweep->add_option("--K", sw.label_counts, "comma-separated label counts (complexity)");
  sweep->add_option("--n-for-k", sw.n_for_k, "spot count for the label-count sweep");
  sweep->add_option("--out", sw.out, "CSV path (default stdout)");
  sw.cfg.attach(sweep);

  QTableArgs qt;
  auto* qtable = app.add_subcommand("qtable", "Q coefficients of SLAM and every benchmark on a synthetic case");
  qtable->add_option("--case", qt.case_id, "I..VI")->required();
  qtable->add_option("--more", qt.more, "1-based index of the more erroneous labeling");
  qtable->add_option("--less", qt.less, "1-based index of the less erroneous labeling");
  qtable->add_option("--out", qt.out, "JSON path (default stdout)");
  qt.cfg.attach(qtable);

  auto* metrics = app.add_subcommand("metrics", "print metric descriptors as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    apply_thread_cap();
    if (*evaluate) return run_evaluate(ev);
    if (*simulate) return run_simulate(sim);
    if (*sweep) return run_sweep(sw);
    if (*qtable) return run_qtable(qt);
    if (*metrics) {
      std::cout << slam::catalog_json() << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPipeline;
  }
  return kUsage;
}
