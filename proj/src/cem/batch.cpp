#include "cem/batch.hpp"

#include <algorithm>
#include <functional>

namespace cem {

void BatchConfig::validate() const {
  validate_cem_settings(population, rho, alpha, p0);
  if (generations == 0) throw ConfigError("T", "must be a positive integer");
}

double elite_threshold(std::span<const double> values, double rho) {
  if (values.empty()) throw ArgumentError("elite_threshold: empty value list");
  if (!(rho > 0.0 && rho < 1.0)) throw ArgumentError("elite_threshold: rho must lie in (0, 1)");
  const std::size_t rank = elite_count(rho, values.size());
  std::vector<double> scratch(values.begin(), values.end());
  const auto nth = scratch.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(scratch.begin(), nth, scratch.end(), std::greater<>{});
  return *nth;
}

BernoulliParams batch_update(std::span<const BitVector> elite, const BernoulliParams& params,
                             double alpha, std::size_t n_b) {
  if (elite.empty()) throw ArgumentError("batch_update: empty elite set");
  if (n_b == 0) throw ArgumentError("batch_update: N_b must be positive");
  if (elite.size() < n_b) {
    throw ArgumentError("batch_update: elite set smaller than N_b");
  }
  const std::size_t n = params.size();
  std::vector<double> mean(n, 0.0);
  for (const auto& x : elite.first(n_b)) {
    if (x.size() != n) throw DimensionError(n, x.size());
    for (std::size_t i = 0; i < n; ++i) mean[i] += x[i];
  }
  for (auto& m : mean) m /= static_cast<double>(n_b);

  BernoulliParams next = params;
  next.blend_toward(std::span<const double>(mean), alpha);
  return next;
}

GenerationResult run_generation(const BatchConfig& config, const Objective& obj,
                                const BernoulliParams& params, RngStream& rng,
                                std::uint64_t first_draw_index) {
  const std::size_t n_pop = config.population;
  const std::size_t n_b = elite_count(config.rho, n_pop);

  std::vector<EvaluatedSample> population;
  population.reserve(n_pop);
  for (std::size_t i = 0; i < n_pop; ++i) {
    population.push_back(evaluate(obj, draw_sample(params, rng), first_draw_index + i));
  }
  // Samples are generated in draw order, so a stable sort on value alone
  // orders exact ties by draw index.
  std::stable_sort(population.begin(), population.end(),
                   [](const EvaluatedSample& a, const EvaluatedSample& b) { return a.value > b.value; });

  GenerationResult result;
  result.gamma = population[n_b - 1].value;
  result.best = population.front();
  const auto elite_end = std::find_if(population.begin() + static_cast<std::ptrdiff_t>(n_b),
                                      population.end(),
                                      [&](const EvaluatedSample& s) { return s.value < result.gamma; });
  result.elite.assign(population.begin(), elite_end);

  std::vector<BitVector> elite_bits;
  elite_bits.reserve(n_b);
  for (std::size_t i = 0; i < n_b; ++i) elite_bits.push_back(result.elite[i].bits);
  result.new_params = batch_update(elite_bits, params, config.alpha, n_b);
  result.ranked = std::move(population);
  return result;
}

RunTrace run_batch(const BatchConfig& config, const Objective& obj, RngStream& rng) {
  config.validate();
  if (config.p0.size() != obj.dimension()) throw DimensionError(obj.dimension(), config.p0.size());

  const std::size_t n_pop = config.population;
  const std::size_t n_b = elite_count(config.rho, n_pop);
  TraceRecorder recorder(Variant::batch, config.p0, config.alpha, config.options, n_pop);
  BernoulliParams params = config.p0;
  double gamma = no_threshold;

  for (std::size_t t = 0; t < config.generations; ++t) {
    const std::uint64_t first = static_cast<std::uint64_t>(t) * n_pop;
    GenerationResult gen = run_generation(config, obj, params, rng, first);
    gamma = gen.gamma;

    // Log in draw order; the elite flag marks the N_b samples that entered the update.
    std::vector<const EvaluatedSample*> by_draw(n_pop);
    std::vector<bool> used(n_pop, false);
    for (std::size_t r = 0; r < n_pop; ++r) {
      const auto slot = gen.ranked[r].draw_index - first;
      by_draw[slot] = &gen.ranked[r];
      used[slot] = r < n_b;
    }
    for (std::size_t i = 0; i < n_pop; ++i) {
      recorder.record_sample(*by_draw[i], {by_draw[i]->value, gamma, 0.0, used[i]});
    }

    recorder.record_update(params.probs(), gen.new_params);
    params = std::move(gen.new_params);
    if (recorder.end_steps(params, gamma, 0.0, n_pop)) break;
  }
  RunTrace trace = recorder.finish(params, gamma, 0.0);
  trace.alpha1 = config.alpha / static_cast<double>(n_b);
  return trace;
}

}  // namespace cem
