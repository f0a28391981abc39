#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cem/batch.hpp"
#include "cem/diagnostics.hpp"
#include "cem/memoryless.hpp"
#include "cem/objectives.hpp"
#include "cem/window.hpp"

namespace cem {

enum class OutputFormat { csv, json };

std::string_view to_string(OutputFormat f);
OutputFormat parse_output_format(std::string_view name);

struct MemorylessSettings {
  DeltaEstimator estimator = DeltaEstimator::uniform_model;
  double beta = 0.01;
  double delta = 1.0;
  std::optional<double> delta0;
  GaussConstantMode gauss_mode = GaussConstantMode::scheme;
  double gauss_constant = calibrated_gauss_multiplier;
  double delta_min = 0.0;
  std::optional<double> gamma0;
};

struct CalibrationSettings {
  std::size_t population = 100;
  double rho = 0.1;
  std::uint64_t reps = 1'000'000;
};

inline ProblemSpec default_problem() {
  ProblemSpec spec;
  spec.kind = ProblemKind::onemax;
  spec.n = 20;
  return spec;
}

/// Everything a harness invocation needs. Replicate r runs with seed
/// base_seed + r.
struct ExperimentConfig {
  ProblemSpec problem = default_problem();
  Variant variant = Variant::window;
  std::size_t population = 100;  // N
  double rho = 0.1;
  double alpha = 0.7;
  std::uint64_t budget = 50'000;          // objective evaluations per replicate
  std::optional<std::size_t> generations; // batch T; default budget / N
  std::optional<std::size_t> samples;     // online K; default budget
  std::vector<double> p0;                 // empty: 0.5 everywhere; one entry: broadcast
  MemorylessSettings memoryless;
  double eps_conv = 1e-6;
  double convergence_eps = 1e-3;
  std::size_t snapshot_stride = 0;
  std::size_t replicates = 10;
  std::uint64_t base_seed = 1;
  unsigned jobs = 0;  // 0: hardware concurrency
  std::string output_path;
  OutputFormat format = OutputFormat::csv;
  bool timing = false;  // adds a wall-clock column (breaks byte-identical output)
  std::vector<double> alphas{0.9, 0.5, 0.2, 0.05};
  CalibrationSettings calibration;

  /// Throws ConfigError naming the field and constraint.
  void validate() const;

  BernoulliParams initial_params(std::size_t n) const;
  std::size_t batch_generations() const;
  std::size_t online_samples() const;
  std::uint64_t evaluations(Variant v) const;

  BatchConfig batch_config(std::size_t n) const;
  OnlineConfig window_config(std::size_t n) const;
  MemorylessConfig memoryless_config(std::size_t n) const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);
/// Full config with every default spelled out (JSON).
std::string dump_config(const ExperimentConfig& config);

/// A typed table rendered as CSV (with a versioned `# schema vN` comment
/// line) or JSON ({"schema", "version", "columns", "rows"}).
struct Table {
  using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

  std::string schema;
  int version = 1;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string render(OutputFormat format) const;
};

struct ResultRow {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  Variant variant = Variant::batch;
  std::uint64_t steps = 0;
  std::uint64_t updates = 0;
  std::optional<std::uint64_t> first_hit;
  double final_best = 0.0;
  bool converged = false;
  std::optional<std::uint64_t> converged_step;
  std::uint64_t sign_changes = 0;
  std::uint64_t envelope_violations = 0;
  double wall_ms = 0.0;
  std::string error;  // empty when the replicate succeeded
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::size_t failed = 0;
};

/// Runs one replicate of `variant` and returns its trace.
RunTrace run_variant(const ExperimentConfig& config, Variant variant, const Objective& obj,
                     std::uint64_t seed);

ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, Variant variant, const Objective& obj);
Table results_table(const ExperimentResult& result, bool timing);

struct BinomialInterval {
  double lo = 0.0;
  double hi = 1.0;
};

/// 95% Wilson score interval for k successes out of n.
BinomialInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

struct SweepRow {
  double alpha = 0.0;
  std::size_t replicates = 0;
  std::size_t hits = 0;
  double hit_rate = 0.0;
  BinomialInterval ci;
  double miss_rate = 0.0;
  double miss_bound = 0.0;  // miss_probability_bound(phi(p0, x*), alpha / ceil(rho N), n)
  std::size_t failed = 0;
};

std::vector<SweepRow> alpha_sweep(const ExperimentConfig& config);
Table sweep_table(const std::vector<SweepRow>& rows);

struct CompareRow {
  Variant variant = Variant::batch;
  std::uint64_t evaluations = 0;
  std::size_t replicates = 0;
  std::size_t hits = 0;
  double hit_rate = 0.0;
  std::optional<double> mean_first_hit;
  std::size_t converged = 0;
  std::optional<double> mean_converged_step;
  std::size_t failed = 0;
};

/// All three variants on the same problem with matched evaluation budgets
/// and matched seeds. Refuses configs whose budgets differ across variants.
std::vector<CompareRow> compare_variants(const ExperimentConfig& config);
Table compare_table(const std::vector<CompareRow>& rows);

/// Order-gap Monte Carlo for uniform(0,1) and normal(0,1), with the scheme
/// constants next to the estimates.
Table calibration_table(const ExperimentConfig& config);

void write_text_file(const std::string& path, std::string_view text);

}  // namespace cem
