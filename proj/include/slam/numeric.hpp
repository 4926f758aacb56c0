#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace slam {

// Correctly rounded floating-point summation (Shewchuk partials, as in
// CPython's math.fsum). The result depends only on the multiset of inputs,
// never on their order, and negating every input negates the result exactly.
class ExactAccumulator {
 public:
  void add(double x);
  double value() const;

 private:
  std::vector<double> partials_;
};

double exact_sum(std::span<const double> xs);
double exact_mean(std::span<const double> xs);

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive independent per-stage streams from
// one user-facing seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Stream identifiers for the evaluation pipeline.
namespace stream {
// Truth and predicted KDE draws share one stream (common random numbers):
// unchanged edges then land on identical sample points and only the
// labeling difference reaches the kernel.
inline constexpr std::uint64_t kde = 1;
inline constexpr std::uint64_t projections = 3;
inline constexpr std::uint64_t generator = 4;
}  // namespace stream

}  // namespace slam
