// Serial reference against OpenMP for each hot kernel.
// Run: build/bench/slam_bench --benchmark_filter=knn

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "slam/kernels.hpp"

using namespace slam;

namespace {

std::vector<Point2> cloud(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  std::vector<Point2> p(n);
  for (auto& q : p) q = {u(rng), u(rng)};
  return p;
}

kernels::SortedProjections projections(std::size_t S) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  kernels::SortedProjections p{S, 50, 100, std::vector<double>(S * 50 * 100)};
  for (auto& v : p.values) v = g(rng);
  for (std::size_t b = 0; b < S * 50; ++b) std::sort(p.values.begin() + b * 100, p.values.begin() + (b + 1) * 100);
  return p;
}

template <auto Fn>
void bm_knn(benchmark::State& st) {
  const auto p = cloud(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(p, 6));
}

template <auto Fn>
void bm_sw_matrix(benchmark::State& st) {
  const auto p = projections(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(Fn(p));
}

template <auto Fn>
void bm_distance_sums(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto p = cloud(n);
  std::vector<int> codes(n);
  for (std::size_t i = 0; i < n; ++i) codes[i] = static_cast<int>(i % 5);
  for (auto _ : st) benchmark::DoNotOptimize(Fn(p, codes, 5));
}

}  // namespace

BENCHMARK(bm_knn<kernels::serial::knn>)->Name("knn/serial")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_knn<kernels::parallel::knn>)->Name("knn/parallel")->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sw_matrix<kernels::serial::sliced_w2_matrix>)
    ->Name("sliced_w2_matrix/serial")->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_sw_matrix<kernels::parallel::sliced_w2_matrix>)
    ->Name("sliced_w2_matrix/parallel")->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_distance_sums<kernels::serial::cluster_distance_sums>)
    ->Name("cluster_distance_sums/serial")->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_distance_sums<kernels::parallel::cluster_distance_sums>)
    ->Name("cluster_distance_sums/parallel")->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
