#include "cem/memoryless.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cem/normal.hpp"

namespace cem {

std::string_view to_string(DeltaEstimator e) {
  switch (e) {
    case DeltaEstimator::constant: return "constant";
    case DeltaEstimator::uniform_model: return "uniform";
    case DeltaEstimator::gauss_model: return "gauss";
  }
  return "unknown";
}

DeltaEstimator parse_delta_estimator(std::string_view name) {
  for (auto e : {DeltaEstimator::constant, DeltaEstimator::uniform_model, DeltaEstimator::gauss_model}) {
    if (name == to_string(e)) return e;
  }
  throw ConfigError("memoryless.estimator",
                    "unknown estimator '" + std::string(name) + "' (expected constant, uniform or gauss)");
}

std::string_view to_string(GaussConstantMode m) {
  return m == GaussConstantMode::scheme ? "scheme" : "calibrated";
}

GaussConstantMode parse_gauss_mode(std::string_view name) {
  if (name == "scheme") return GaussConstantMode::scheme;
  if (name == "calibrated") return GaussConstantMode::calibrated;
  throw ConfigError("memoryless.gauss_mode",
                    "unknown mode '" + std::string(name) + "' (expected scheme or calibrated)");
}

ThresholdState threshold_step(ThresholdState state, bool is_elite, double rho) {
  state.gamma += is_elite ? (1.0 - rho) * state.delta : -rho * state.delta;
  return state;
}

double delta0_uniform(std::size_t population) {
  if (population == 0) throw ArgumentError("delta0_uniform: N must be positive");
  return 3.0 / (static_cast<double>(population) + 1.0);
}

double gauss_quantile_gap(std::size_t population, double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw DomainError("rho must lie in (0, 1)");
  if (population == 0) throw DomainError("N must be positive");
  const double upper = 1.0 - rho + 1.0 / static_cast<double>(population);
  if (!(upper < 1.0)) {
    throw DomainError("1 - rho + 1/N = " + std::to_string(upper) + " is not below 1 (need N > 1/rho)");
  }
  return normal_quantile(upper) - normal_quantile(1.0 - rho);
}

double delta0_gauss(std::size_t population, double rho) {
  return scheme_gauss_multiplier * gauss_quantile_gap(population, rho);
}

double delta0_gauss(std::size_t population, double rho, GaussConstantMode mode,
                    double calibrated_multiplier) {
  const double c = mode == GaussConstantMode::scheme ? scheme_gauss_multiplier : calibrated_multiplier;
  return c * gauss_quantile_gap(population, rho);
}

ThresholdState delta_update(ThresholdState state, double f_new) {
  if (state.estimator == DeltaEstimator::constant) {
    throw ArgumentError("delta_update called with the constant estimator");
  }
  if (!state.prev_value) throw ArgumentError("delta_update: previous value not primed");
  const double diff = std::abs(f_new - *state.prev_value);
  state.delta = std::max(state.delta_min,
                         (1.0 - state.beta) * state.delta + state.beta * state.delta0 * diff);
  state.prev_value = f_new;
  return state;
}

void MemorylessConfig::validate() const {
  validate_cem_settings(population, rho, alpha, p0);
  if (static_cast<double>(population) * rho <= 1.0) {
    throw ConfigError("N", "memoryless variant requires N > 1/rho");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("memoryless.beta", "must lie in [0, 1]");
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ConfigError("memoryless.delta", "must be finite and non-negative");
  }
  if (delta0 && !(*delta0 > 0.0 && std::isfinite(*delta0))) {
    throw ConfigError("memoryless.delta0", "must be finite and positive");
  }
  if (!(gauss_multiplier > 0.0)) throw ConfigError("memoryless.gauss_constant", "must be positive");
  if (!(delta_min >= 0.0)) throw ConfigError("memoryless.delta_min", "must be non-negative");
  if (gamma0 && !std::isfinite(*gamma0)) throw ConfigError("memoryless.gamma0", "must be finite");
}

double MemorylessConfig::step_size() const {
  return alpha / static_cast<double>(elite_count(rho, population));
}

double MemorylessConfig::scheme_delta0() const {
  if (delta0) return *delta0;
  switch (estimator) {
    case DeltaEstimator::constant: return 0.0;
    case DeltaEstimator::uniform_model: return delta0_uniform(population);
    case DeltaEstimator::gauss_model: return delta0_gauss(population, rho, gauss_mode, gauss_multiplier);
  }
  return 0.0;
}

ThresholdState MemorylessConfig::initial_state() const {
  ThresholdState s;
  s.gamma = gamma0.value_or(0.0);
  s.delta = std::max(delta, delta_min);
  s.estimator = estimator;
  s.beta = beta;
  s.delta0 = scheme_delta0();
  s.delta_min = delta_min;
  return s;
}

ThresholdTracker::ThresholdTracker(ThresholdState initial, double rho, bool gamma_from_first_sample)
    : state_(std::move(initial)), rho_(rho), pending_first_(gamma_from_first_sample) {}

bool ThresholdTracker::observe(double value) {
  if (pending_first_) {
    state_.gamma = value;
    pending_first_ = false;
  }
  const bool elite = value >= state_.gamma;
  state_ = threshold_step(std::move(state_), elite, rho_);
  if (state_.estimator != DeltaEstimator::constant) {
    if (state_.prev_value) {
      state_ = delta_update(std::move(state_), value);
    } else {
      state_.prev_value = value;
    }
  }
  return elite;
}

RunTrace run_memoryless(const MemorylessConfig& config, const Objective& obj, RngStream& rng) {
  config.validate();
  if (config.p0.size() != obj.dimension()) throw DimensionError(obj.dimension(), config.p0.size());

  const double alpha1 = config.step_size();
  TraceRecorder recorder(Variant::memoryless, config.p0, alpha1, config.options, config.population);
  ThresholdTracker tracker(config.initial_state(), config.rho, !config.gamma0.has_value());
  BernoulliParams params = config.p0;
  std::vector<double> before;
  BitVector bits;

  for (std::size_t t = 0; t < config.samples; ++t) {
    draw_sample_into(params, rng, bits);
    EvaluatedSample sample = evaluate(obj, bits, t);
    const double delta_in_effect = tracker.state().delta;
    const bool gamma_pending = t == 0 && !config.gamma0;
    const double gamma_tested = gamma_pending ? sample.value : tracker.state().gamma;
    const bool elite = tracker.observe(sample.value);
    recorder.record_sample(sample, {sample.value, gamma_tested, delta_in_effect, elite});

    if (elite && !config.freeze_params) {
      before.assign(params.probs().begin(), params.probs().end());
      params.blend_toward(std::span<const std::uint8_t>(sample.bits), alpha1);
      recorder.record_update(before, params);
    }
    if (recorder.end_steps(params, tracker.state().gamma, tracker.state().delta)) break;
  }
  return recorder.finish(params, tracker.state().gamma, tracker.state().delta);
}

}  // namespace cem
