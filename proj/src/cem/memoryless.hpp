#pragma once

#include <optional>
#include <string_view>

#include "cem/core.hpp"
#include "cem/trace.hpp"

namespace cem {

/// How the threshold step scale Delta is obtained.
enum class DeltaEstimator {
  constant,       // fixed Delta
  uniform_model,  // EWMA of Delta0_uniform * |f_t - f_{t-1}|
  gauss_model,    // EWMA of Delta0_gauss * |f_t - f_{t-1}|
};

/// Which multiplier turns the normal quantile gap into Delta0_gauss.
enum class GaussConstantMode {
  scheme,      // 2 sqrt(pi)
  calibrated,  // configurable c; default sqrt(pi) / 2 from E|X - Y| = 2 sigma / sqrt(pi)
};

std::string_view to_string(DeltaEstimator e);
DeltaEstimator parse_delta_estimator(std::string_view name);
std::string_view to_string(GaussConstantMode m);
GaussConstantMode parse_gauss_mode(std::string_view name);

inline constexpr double scheme_gauss_multiplier = 3.5449077018110320546;        // 2 sqrt(pi)
inline constexpr double calibrated_gauss_multiplier = 0.88622692545275801365;  // sqrt(pi) / 2

struct ThresholdState {
  double gamma = 0.0;
  double delta = 0.0;
  std::optional<double> prev_value;
  DeltaEstimator estimator = DeltaEstimator::constant;
  double beta = 0.01;
  double delta0 = 0.0;
  double delta_min = 0.0;
};

/// gamma += (1 - rho) delta on an elite sample, gamma -= rho delta otherwise.
ThresholdState threshold_step(ThresholdState state, bool is_elite, double rho);

/// 3 / (N + 1).
double delta0_uniform(std::size_t population);

/// Phi^{-1}(1 - rho + 1/N) - Phi^{-1}(1 - rho). DomainError unless N > 1/rho.
double gauss_quantile_gap(std::size_t population, double rho);

/// 2 sqrt(pi) * gauss_quantile_gap(N, rho).
double delta0_gauss(std::size_t population, double rho);

/// multiplier * gauss_quantile_gap(N, rho).
double delta0_gauss(std::size_t population, double rho, GaussConstantMode mode,
                    double calibrated_multiplier = calibrated_gauss_multiplier);

/// delta <- max(delta_min, (1 - beta) delta + beta delta0 |f_new - prev|),
/// prev <- f_new. Requires a non-constant estimator and a primed prev_value.
ThresholdState delta_update(ThresholdState state, double f_new);

struct MemorylessConfig {
  std::size_t population = 100;  // nominal N; no buffer is kept
  double rho = 0.1;
  double alpha = 0.7;
  std::size_t samples = 5000;  // K
  BernoulliParams p0 = BernoulliParams::uniform(1);
  RunOptions options;

  DeltaEstimator estimator = DeltaEstimator::uniform_model;
  double beta = 0.01;
  double delta = 1.0;                 // constant Delta, or the EWMA's starting value
  std::optional<double> delta0;       // overrides the scheme constant
  GaussConstantMode gauss_mode = GaussConstantMode::scheme;
  double gauss_multiplier = calibrated_gauss_multiplier;  // used in calibrated mode
  double delta_min = 0.0;
  std::optional<double> gamma0;       // empty: value of the first sample
  bool freeze_params = false;         // sample from p0 throughout (diagnostic runs)

  void validate() const;
  double step_size() const;  // alpha / ceil(rho N)
  double scheme_delta0() const;
  ThresholdState initial_state() const;
};

/// Constant-memory threshold tracker: decides elite membership of a stream of
/// objective values and adapts gamma and Delta.
class ThresholdTracker {
 public:
  ThresholdTracker(ThresholdState initial, double rho, bool gamma_from_first_sample);

  /// Tests `value` against the current gamma, moves gamma, then updates Delta.
  bool observe(double value);

  const ThresholdState& state() const noexcept { return state_; }

 private:
  ThresholdState state_;
  double rho_;
  bool pending_first_;
};

RunTrace run_memoryless(const MemorylessConfig& config, const Objective& obj, RngStream& rng);

}  // namespace cem
