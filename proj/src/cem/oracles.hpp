#pragma once

#include <cstdint>

#include "cem/core.hpp"

namespace cem {

struct ValueDistribution {
  enum class Kind { uniform, normal } kind = Kind::uniform;
  double a = 0.0;  // uniform: lower bound; normal: mean
  double b = 1.0;  // uniform: upper bound; normal: standard deviation

  static ValueDistribution uniform(double lo, double hi) { return {Kind::uniform, lo, hi}; }
  static ValueDistribution normal(double mu, double sigma) { return {Kind::normal, mu, sigma}; }

  double draw(RngStream& rng) const {
    return kind == Kind::uniform ? rng.uniform(a, b) : rng.normal(a, b);
  }
};

struct GapEstimate {
  double mean_gap = 0.0;      // E(f_(Ne) - f_(Ne+1)), descending order statistics
  double mean_absdiff = 0.0;  // E|X - Y|
  double ratio = 0.0;         // mean_gap / mean_absdiff
  std::uint64_t samples = 0;
  double gap_stderr = 0.0;
  double absdiff_stderr = 0.0;
};

inline constexpr std::uint64_t min_oracle_reps = 10'000;

/// Monte Carlo estimate of the gap between the ceil(rho N)-th and next
/// largest of N i.i.d. draws, and of E|X - Y| from `reps` independent pairs.
/// Work is split into a fixed number of chunks, each with its own substream
/// of `seed`, so the result depends on the seed only (not on `jobs`).
GapEstimate order_gap_mc(const ValueDistribution& dist, std::size_t population, double rho,
                         std::uint64_t reps, std::uint64_t seed, unsigned jobs = 1);

/// Empirical Delta0 for normally distributed values: mean_gap / mean_absdiff.
double calibrate_delta0_gauss(std::size_t population, double rho, std::uint64_t reps,
                              std::uint64_t seed, unsigned jobs = 1);

/// Sum of Pr(x) over all x in {0,1}^n with x == x_star, by full enumeration.
/// CapacityError for n > 20.
double exhaustive_success_prob(const BernoulliParams& params, std::span<const std::uint8_t> x_star);

}  // namespace cem
