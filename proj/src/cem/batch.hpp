#pragma once

#include <span>
#include <vector>

#include "cem/core.hpp"
#include "cem/trace.hpp"

namespace cem {

struct BatchConfig {
  std::size_t population = 100;  // N
  double rho = 0.1;
  double alpha = 0.7;
  std::size_t generations = 50;  // T
  BernoulliParams p0 = BernoulliParams::uniform(1);
  RunOptions options;

  /// Throws ConfigError when N, rho, alpha or p0 are out of range
  /// (p0 must be strictly inside (0, 1)).
  void validate() const;
};

struct GenerationResult {
  double gamma = 0.0;
  std::vector<EvaluatedSample> elite;  // every sample with value >= gamma, best first
  BernoulliParams new_params = BernoulliParams::uniform(1);
  EvaluatedSample best;
  std::vector<EvaluatedSample> ranked;  // whole population, best first, ties by draw index
};

/// ceil(rho N)-th largest of `values` (1-indexed, duplicates ranked separately).
double elite_threshold(std::span<const double> values, double rho);

/// Smoothed Bernoulli refit:
///   p' = (sum of the first n_b elite vectors) / n_b,  p <- (1 - alpha) p + alpha p'.
/// `elite` must be ordered best first; members past n_b are ignored.
BernoulliParams batch_update(std::span<const BitVector> elite, const BernoulliParams& params,
                             double alpha, std::size_t n_b);

/// One generation: draw N samples, rank them, threshold, refit.
/// `first_draw_index` numbers the samples.
GenerationResult run_generation(const BatchConfig& config, const Objective& obj,
                                const BernoulliParams& params, RngStream& rng,
                                std::uint64_t first_draw_index);

RunTrace run_batch(const BatchConfig& config, const Objective& obj, RngStream& rng);

}  // namespace cem
