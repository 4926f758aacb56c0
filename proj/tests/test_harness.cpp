#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "slam/attributes.hpp"
#include "slam/graph.hpp"
#include "slam/harness.hpp"

using namespace slam;

namespace {

std::size_t count_label(const Labeling& l, const std::string& t) {
  return static_cast<std::size_t>(std::count(l.labels().begin(), l.labels().end(), t));
}

// Multiset of (type, count) over the unweighted typed edges, with the label
// tokens swapped on one side so mirrored designs compare equal.
std::map<std::pair<std::string, std::string>, int> typed_edge_stats(const CaseInstance& c, const Labeling& l) {
  const auto g = build_mutual_knn(c.dataset.coords(), static_cast<std::size_t>(c.config.k_neighbors));
  std::map<std::pair<std::string, std::string>, int> out;
  for (const auto& e : g.edges()) {
    auto a = c.truth.labels()[e.u] + "/" + l.labels()[e.u];
    auto b = c.truth.labels()[e.v] + "/" + l.labels()[e.v];
    if (b < a) std::swap(a, b);
    ++out[{a, b}];
  }
  return out;
}

}  // namespace

TEST_CASE("q coefficient examples") {
  CHECK(q_coefficient(metric_descriptor("accuracy"), 0.3333, 0.6667) == doctest::Approx(0.3334).epsilon(1e-12));
  CHECK(q_coefficient(metric_descriptor("accuracy"), 1.0 / 3.0, 2.0 / 3.0) == doctest::Approx(1.0 / 3.0));
  CHECK(q_coefficient(metric_descriptor("chaos"), 2.0, 1.5) == doctest::Approx(0.25));
  CHECK(q_coefficient(metric_descriptor("ari"), 0.4, 0.4) == 0.0);
  CHECK_FALSE(std::signbit(q_coefficient(metric_descriptor("nmi"), 0.0, 0.0)));
  // Only an upper bound: r = sup - s2.
  const MetricDescriptor upper{"u", MetricFamily::Internal, std::nullopt, 1.0, false, false, Direction::LowerBetter};
  CHECK(q_coefficient(upper, 0.5, -1.0) == doctest::Approx(1.5 / 2.0));
  // Unbounded: r = max(|s1|, |s2|).
  const MetricDescriptor free{"f", MetricFamily::Internal, std::nullopt, std::nullopt, false, false,
                              Direction::HigherBetter};
  CHECK(q_coefficient(free, -2.0, 4.0) == doctest::Approx(1.5));
  CHECK(q_coefficient(metric_descriptor("ch"), 3.0, 5.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(q_coefficient(metric_descriptor("chaos"), 0.0, 0.0), HarnessError);
  CHECK_THROWS_AS(q_coefficient(metric_descriptor("chaos"), std::nan(""), 0.0), HarnessError);
}

TEST_CASE("case ids") {
  CHECK(parse_case_id("IV") == CaseId::IV);
  CHECK(parse_case_id("6") == CaseId::VI);
  CHECK(to_string(CaseId::III) == "III");
  CHECK_THROWS_AS(parse_case_id("VII"), HarnessError);
}

TEST_CASE("case I layout") {
  const auto c = generate_case(CaseId::I, 1);
  CHECK(c.dataset.size() == 36);
  CHECK(count_label(c.truth, "A") == 36);
  CHECK(c.mislabels == std::vector<std::size_t>{24, 12});
  // Mismatch topologies: both cuts are one straight vertical line.
  const auto g = build_mutual_knn(c.dataset.coords(), 4);
  for (const auto& l : c.labelings) {
    const auto t = type_edges(g, l);
    CHECK(std::count(t.begin(), t.end(), 0) == 6);
  }
}

TEST_CASE("case II layout") {
  const auto c = generate_case(CaseId::II, 7);
  CHECK(c.dataset.size() == 360);
  CHECK(count_label(c.truth, "A") == 180);
  CHECK(c.labelings.size() == 10);
  CHECK(c.mislabels == case2_counts());
  CHECK(case2_counts().front() == 9);
  CHECK(case2_counts().back() == 95);
  // Each step extends the previous one.
  for (std::size_t s = 1; s < c.labelings.size(); ++s) {
    for (std::size_t i = 0; i < c.dataset.size(); ++i) {
      if (c.labelings[s - 1].labels()[i] == "B") CHECK(c.labelings[s].labels()[i] == "B");
    }
  }
}

TEST_CASE("case III layout") {
  const auto c = generate_case(CaseId::III, 1);
  CHECK(c.dataset.size() == 30);
  CHECK(count_label(c.truth, "tumor") == 15);
  CHECK(c.mislabels == std::vector<std::size_t>{3, 3});
  const auto& a = *c.dataset.attributes();
  double lo = 2, hi = -1;
  for (std::size_t i = 0; i < 30; ++i) {
    if (c.truth.labels()[i] == "normal") {
      CHECK(a.row(i)[0] == 0.0);
    } else {
      lo = std::min(lo, a.row(i)[0]);
      hi = std::max(hi, a.row(i)[0]);
    }
  }
  CHECK(lo == doctest::Approx(0.5));
  CHECK(hi == doctest::Approx(1.0));
  // Core flips sit deeper in the tumor than edge flips.
  double core = 0, edge = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    if (c.labelings[0].labels()[i] != c.truth.labels()[i]) core += a.row(i)[0];
    if (c.labelings[1].labels()[i] != c.truth.labels()[i]) edge += a.row(i)[0];
  }
  CHECK(core > edge);
}

TEST_CASE("case IV layout") {
  const auto c = generate_case(CaseId::IV, 5);
  CHECK(c.dataset.size() == 100);
  CHECK(count_label(c.truth, "normal") == 100);
  CHECK(c.mislabels == std::vector<std::size_t>{40, 40});
  const auto g = build_mutual_knn(c.dataset.coords(), 4);
  const auto dispersed = type_edges(g, c.labelings[0]);
  // No two dispersed mislabels touch each other.
  CHECK(std::count(dispersed.begin(), dispersed.end(), 1) == 0);
  // The dispersed cancer class never sits on the lattice centroid.
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto s = generate_case(CaseId::IV, seed);
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < 100; ++i) {
      if (s.labelings[0].labels()[i] != "cancer") continue;
      sx += s.dataset.coords()[i].x;
      sy += s.dataset.coords()[i].y - 4.5;
    }
    CHECK((sx != 0.0 || sy != 0.0));
  }
}

TEST_CASE("case V mirror symmetry") {
  const auto c = generate_case(CaseId::V, 1);
  CHECK(c.dataset.size() == 30);
  CHECK(count_label(c.truth, "normal") == 15);
  CHECK(c.mislabels == std::vector<std::size_t>{6, 6});
  const auto& p = c.dataset.coords();
  std::vector<Point2> fn, fp;
  for (std::size_t i = 0; i < 30; ++i) {
    if (c.labelings[0].labels()[i] != c.truth.labels()[i]) fn.push_back(p[i]);
    if (c.labelings[1].labels()[i] != c.truth.labels()[i]) fp.push_back({-p[i].x, p[i].y});
  }
  const auto by = [](const Point2& a, const Point2& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); };
  std::sort(fn.begin(), fn.end(), by);
  std::sort(fp.begin(), fp.end(), by);
  CHECK(fn == fp);
  // Unweighted typed-edge counts agree once the two classes are swapped.
  auto a = typed_edge_stats(c, c.labelings[0]);
  auto b = typed_edge_stats(c, c.labelings[1]);
  std::multiset<int> ca, cb;
  for (auto& [_, v] : a) ca.insert(v);
  for (auto& [_, v] : b) cb.insert(v);
  CHECK(ca == cb);
}

TEST_CASE("case VI cosines and symmetry") {
  const auto c = generate_case(CaseId::VI, 1);
  CHECK(c.dataset.size() == 30);
  for (const char* t : {"adipose", "gland", "cancer"}) CHECK(count_label(c.truth, t) == 10);
  CHECK(c.dataset.attribute_dim() == 50);
  const auto& a = *c.dataset.attributes();
  std::map<std::string, std::size_t> any;
  for (std::size_t i = 0; i < 30; ++i) any[c.truth.labels()[i]] = i;
  CHECK(std::abs(similarity(a.row(any["gland"]), a.row(any["adipose"])) - 0.791) < 1e-6);
  CHECK(std::abs(similarity(a.row(any["gland"]), a.row(any["cancer"])) - 0.673) < 1e-6);
  CHECK(c.mislabels == std::vector<std::size_t>{3, 3});
  for (std::size_t l = 0; l < 2; ++l) {
    for (std::size_t i = 0; i < 30; ++i) {
      if (c.labelings[l].labels()[i] != c.truth.labels()[i]) CHECK(c.labelings[l].labels()[i] == "gland");
    }
  }
  auto s0 = typed_edge_stats(c, c.labelings[0]);
  auto s1 = typed_edge_stats(c, c.labelings[1]);
  std::multiset<int> m0, m1;
  for (auto& [_, v] : s0) m0.insert(v);
  for (auto& [_, v] : s1) m1.insert(v);
  CHECK(m0 == m1);
}

TEST_CASE("generation is reproducible") {
  for (int id = 1; id <= 6; ++id) {
    const auto a = generate_case(static_cast<CaseId>(id), 99);
    const auto b = generate_case(static_cast<CaseId>(id), 99);
    CHECK(a.dataset.coords() == b.dataset.coords());
    CHECK(a.truth.labels() == b.truth.labels());
    for (std::size_t l = 0; l < a.labelings.size(); ++l) CHECK(a.labelings[l].labels() == b.labelings[l].labels());
  }
}

TEST_CASE("spearman") {
  CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(0.9486832980505138));
}

TEST_CASE("case I q table") {
  const auto c = generate_case(CaseId::I, 1);
  std::map<std::string, double> q;
  for (const auto& r : case_q_table(c, c.config)) q[r.metric] = r.q;
  CHECK(q.at("accuracy") == doctest::Approx(1.0 / 3.0));
  CHECK(std::abs(q.at("jaccard") - 0.166) < 0.01);
  for (const char* m : {"ari", "nmi", "fmi", "chaos", "pas", "asw", "ch", "db"}) CHECK(q.at(m) == 0.0);
  CHECK(q.at("slam") > 0.0);
}

TEST_CASE("sensitivity sweep shape and determinism") {
  const auto base = generate_case(CaseId::II, 1);
  auto cfg = base.config;
  cfg.num_samples = 6;
  cfg.batch_size = 40;
  cfg.num_projections = 10;
  const auto a = sensitivity_sweep({0.5, 0.1}, base, cfg);
  REQUIRE(a.size() == 20);
  CHECK(a.front().h == 0.1);
  CHECK(a.front().step == 1);
  CHECK(a.back().step == 10);
  CHECK(a[3].mislabels == case2_counts()[3]);
  CHECK(a[3].error_rate == doctest::Approx(38.0 / 360.0));
  const auto b = sensitivity_sweep({0.5, 0.1}, base, cfg);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].d == b[i].d);
  std::ostringstream out;
  write_sensitivity_csv(out, a);
  const auto text = out.str();
  CHECK(text.rfind("h,step,mislabels,error_rate,slam\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 21);
  CHECK_THROWS(sensitivity_sweep({11.0}, base, cfg));
}

TEST_CASE("complexity sweep smoke") {
  const auto rows = complexity_sweep({10, 100}, {3}, EvaluationConfig{}, 200);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].axis == "n");
  CHECK(rows[0].n == 10);
  CHECK(std::isfinite(rows[0].d));
  CHECK(rows[2].axis == "K");
  CHECK(rows[2].K == 3);
  std::ostringstream out;
  write_complexity_csv(out, rows);
  CHECK(out.str().rfind("axis,n,K,seconds,slam\n", 0) == 0);
}
