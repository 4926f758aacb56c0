#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "slam/graph.hpp"
#include "slam/kernels.hpp"

using namespace slam;

namespace {

std::vector<Point2> grid(int w, int h) {
  std::vector<Point2> p;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) p.push_back({static_cast<double>(x), static_cast<double>(y)});
  }
  return p;
}

std::set<std::pair<std::size_t, std::size_t>> edge_set(const SpatialGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> s;
  for (const auto& e : g.edges()) s.insert({e.u, e.v});
  return s;
}

}  // namespace

TEST_CASE("two nodes share one edge") {
  const std::vector<Point2> p = {{0, 0}, {5, 5}};
  const auto g = build_mutual_knn(p, 1);
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK(g.edge_index(1, 0) == 1);
}

TEST_CASE("collinear 0, 1, 10") {
  const std::vector<Point2> p = {{0, 0}, {1, 0}, {10, 0}};
  const auto g = build_mutual_knn(p, 1);
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edges()[0] == Edge{0, 1});
  CHECK_FALSE(g.edge_index(1, 2).has_value());
}

TEST_CASE("6x6 grid with k=4") {
  const auto g = build_mutual_knn(grid(6, 6), 4);
  const auto deg = g.degrees();
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) {
      const auto d = deg[static_cast<std::size_t>(y * 6 + x)];
      const bool xi = x > 0 && x < 5;
      const bool yi = y > 0 && y < 5;
      if (xi && yi) CHECK(d == 4);
      if (!xi && !yi) CHECK(d == 2);
    }
  }
  CHECK(edge_set(g) == oracle::mutual_knn(grid(6, 6), 4));
}

TEST_CASE("edge index is a symmetric bijection") {
  const auto g = build_mutual_knn(grid(5, 4), 4);
  std::set<std::size_t> seen;
  for (const auto& e : g.edges()) {
    CHECK(e.u < e.v);
    const auto i = g.edge_index(e.u, e.v);
    REQUIRE(i.has_value());
    CHECK(g.edge_index(e.v, e.u) == i);
    seen.insert(*i);
  }
  CHECK(seen.size() == g.num_edges());
  CHECK(*seen.begin() == 1);
  CHECK(*seen.rbegin() == g.num_edges());
}

TEST_CASE("knn lists") {
  const std::vector<Point2> line = {{0, 0}, {1, 0}, {2.5, 0}};
  const auto l = knn_lists(line, 2);
  CHECK(l[1] == std::vector<std::size_t>{0, 2});

  const std::vector<Point2> twin = {{1, 1}, {0, 0}, {1, 1}, {0, 0}};
  CHECK(knn_lists(twin, 1)[0] == std::vector<std::size_t>{2});
  CHECK(knn_lists(twin, 1)[3] == std::vector<std::size_t>{1});
  // Tie at distance 1 from the centre of a plus: lowest index first.
  const std::vector<Point2> plus = {{0, 1}, {1, 0}, {0, 0}, {-1, 0}, {0, -1}};
  CHECK(knn_lists(plus, 4)[2] == std::vector<std::size_t>{0, 1, 3, 4});
}

TEST_CASE("knn lists match a full sort on a grid") {
  const auto p = grid(7, 5);
  const auto l = knn_lists(p, 6);
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> d;
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (j != i) d.push_back({squared_distance(p[i], p[j]), j});
    }
    std::sort(d.begin(), d.end());
    for (std::size_t t = 0; t < 6; ++t) CHECK(l[i][t] == d[t].second);
  }
}

TEST_CASE("random clouds match the brute-force mutual set") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 + rng() % 199;
    std::vector<Point2> p(n);
    for (auto& q : p) q = {u(rng), u(rng)};
    if (trial % 4 == 0) {
      for (auto& q : p) q = {std::round(q.x), std::round(q.y)};  // force ties
    }
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n - 1, 8);
    const auto g = build_mutual_knn(p, k);
    CHECK(edge_set(g) == oracle::mutual_knn(p, k));
    CHECK(build_mutual_knn(p, k, Exec::Serial).edges() == g.edges());
  }
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-5, 5);
  std::vector<Point2> p(500);
  for (auto& q : p) q = {u(rng), u(rng)};
  CHECK(kernels::serial::knn(p, 10).idx == kernels::parallel::knn(p, 10).idx);
  std::vector<int> codes(p.size());
  for (auto& c : codes) c = static_cast<int>(rng() % 4);
  CHECK(kernels::serial::cluster_distance_sums(p, codes, 4) == kernels::parallel::cluster_distance_sums(p, codes, 4));
}

TEST_CASE("graph errors") {
  const std::vector<Point2> one = {{0, 0}};
  CHECK_THROWS_AS(build_mutual_knn(one, 1), GraphError);
  const std::vector<Point2> two = {{0, 0}, {1, 1}};
  CHECK_THROWS_AS(build_mutual_knn(two, 2), GraphError);
  CHECK_THROWS_AS(build_mutual_knn(two, 0), GraphError);
}

TEST_CASE("edge export") {
  const std::vector<Point2> p = {{0, 0}, {1, 0}, {10, 0}};
  std::ostringstream out;
  write_edges_csv(out, build_mutual_knn(p, 1));
  CHECK(out.str() == "u,v,I\n0,1,1\n");
}
