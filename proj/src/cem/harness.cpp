#include "cem/harness.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "cem/oracles.hpp"
#include "cem/parallel.hpp"

namespace cem {

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("format", "must be csv or json");
}

// --- ExperimentConfig -------------------------------------------------------

void ExperimentConfig::validate() const {
  const ObjectivePtr obj = make_objective(problem);
  const std::size_t n = obj->dimension();
  if (!p0.empty() && p0.size() != 1 && p0.size() != n) {
    throw ConfigError("p0", "must be a scalar or have length n = " + std::to_string(n));
  }
  for (double p : p0) {
    if (!(p > 0.0 && p < 1.0)) throw ConfigError("p0", "every entry must lie strictly inside (0, 1)");
  }
  validate_cem_settings(population, rho, alpha, initial_params(n));
  if (budget == 0) throw ConfigError("budget", "must be positive");
  if (generations && *generations == 0) throw ConfigError("T", "must be positive");
  if (samples && *samples == 0) throw ConfigError("K", "must be positive");
  if (variant == Variant::batch && !generations && budget % population != 0) {
    throw ConfigError("budget", "must be a multiple of N for the batch variant (or set T)");
  }
  if (variant == Variant::memoryless) memoryless_config(n).validate();
  if (eps_conv != 0.0 && !(eps_conv > 0.0 && eps_conv < 0.5)) {
    throw ConfigError("eps_conv", "must be 0 (disabled) or lie in (0, 0.5)");
  }
  if (!(convergence_eps > 0.0 && convergence_eps < 0.5)) {
    throw ConfigError("convergence_eps", "must lie in (0, 0.5)");
  }
  if (replicates == 0) throw ConfigError("replicates", "must be positive");
  if (alphas.empty()) throw ConfigError("sweep.alphas", "must be non-empty");
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("sweep.alphas", "every alpha must lie in (0, 1]");
  }
  if (!(calibration.rho > 0.0 && calibration.rho < 1.0)) {
    throw ConfigError("calibration.rho", "must lie in (0, 1)");
  }
  if (static_cast<double>(calibration.population) * calibration.rho <= 1.0) {
    throw ConfigError("calibration.N", "must exceed 1/rho");
  }
  if (calibration.reps < min_oracle_reps) throw ConfigError("calibration.reps", "must be at least 10000");
}

BernoulliParams ExperimentConfig::initial_params(std::size_t n) const {
  if (p0.empty()) return BernoulliParams::uniform(n, 0.5);
  if (p0.size() == 1) return BernoulliParams::uniform(n, p0.front());
  return BernoulliParams(p0);
}

std::size_t ExperimentConfig::batch_generations() const {
  return generations.value_or(static_cast<std::size_t>(budget / population));
}

std::size_t ExperimentConfig::online_samples() const {
  return samples.value_or(static_cast<std::size_t>(budget));
}

std::uint64_t ExperimentConfig::evaluations(Variant v) const {
  return v == Variant::batch ? static_cast<std::uint64_t>(batch_generations()) * population
                             : online_samples();
}

namespace {

RunOptions run_options(const ExperimentConfig& c) {
  RunOptions o;
  o.snapshot_stride = c.snapshot_stride;
  o.eps_conv = c.eps_conv;
  o.convergence_eps = c.convergence_eps;
  o.record_steps = false;
  return o;
}

}  // namespace

BatchConfig ExperimentConfig::batch_config(std::size_t n) const {
  BatchConfig b;
  b.population = population;
  b.rho = rho;
  b.alpha = alpha;
  b.generations = batch_generations();
  b.p0 = initial_params(n);
  b.options = run_options(*this);
  return b;
}

OnlineConfig ExperimentConfig::window_config(std::size_t n) const {
  OnlineConfig w;
  w.window = population;
  w.rho = rho;
  w.alpha = alpha;
  w.samples = online_samples();
  w.p0 = initial_params(n);
  w.options = run_options(*this);
  return w;
}

MemorylessConfig ExperimentConfig::memoryless_config(std::size_t n) const {
  MemorylessConfig m;
  m.population = population;
  m.rho = rho;
  m.alpha = alpha;
  m.samples = online_samples();
  m.p0 = initial_params(n);
  m.options = run_options(*this);
  m.estimator = memoryless.estimator;
  m.beta = memoryless.beta;
  m.delta = memoryless.delta;
  m.delta0 = memoryless.delta0;
  m.gauss_mode = memoryless.gauss_mode;
  m.gauss_multiplier = memoryless.gauss_constant;
  m.delta_min = memoryless.delta_min;
  m.gamma0 = memoryless.gamma0;
  return m;
}

// --- Table rendering ---------------------------------------------------------

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Table::Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return csv_escape(v);
        } else {
          return std::to_string(v);
        }
      },
      cell);
}

nlohmann::ordered_json cell_json(const Table::Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

std::string Table::render(OutputFormat format) const {
  if (format == OutputFormat::csv) {
    std::string out = "# " + schema + " v" + std::to_string(version) + "\n";
    for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
    out += "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + cell_text(row[c]);
      out += "\n";
    }
    return out;
  }
  nlohmann::ordered_json doc;
  doc["schema"] = schema;
  doc["version"] = version;
  doc["columns"] = columns;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[columns[c]] = cell_json(row[c]);
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

// --- Experiments -------------------------------------------------------------

RunTrace run_variant(const ExperimentConfig& config, Variant variant, const Objective& obj,
                     std::uint64_t seed) {
  RngStream rng(seed);
  const std::size_t n = obj.dimension();
  switch (variant) {
    case Variant::batch: return run_batch(config.batch_config(n), obj, rng);
    case Variant::window: return run_online_window(config.window_config(n), obj, rng);
    case Variant::memoryless: return run_memoryless(config.memoryless_config(n), obj, rng);
  }
  throw ArgumentError("unknown variant");
}

ExperimentResult run_experiment(const ExperimentConfig& config, Variant variant, const Objective& obj) {
  ExperimentResult result;
  result.rows.resize(config.replicates);
  parallel_for(config.replicates, config.jobs, [&](std::uint64_t r) {
    ResultRow& row = result.rows[r];
    row.replicate = static_cast<std::size_t>(r);
    row.seed = config.base_seed + r;
    row.variant = variant;
    const auto start = std::chrono::steady_clock::now();
    try {
      const RunTrace trace = run_variant(config, variant, obj, row.seed);
      const ConvergenceReport report = analyze(trace, obj, config.convergence_eps);
      row.steps = trace.steps;
      row.updates = trace.updates;
      row.first_hit = report.first_hit_step;
      row.final_best = trace.best.value;
      row.converged = report.converged_binary;
      row.converged_step = report.converged_step;
      row.sign_changes = report.sign_change_total;
      row.envelope_violations = report.envelope_violations;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  for (const auto& row : result.rows) result.failed += row.error.empty() ? 0 : 1;
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ObjectivePtr obj = make_objective(config.problem);
  return run_experiment(config, config.variant, *obj);
}

Table results_table(const ExperimentResult& result, bool timing) {
  Table t;
  t.schema = "cem-results";
  t.columns = {"replicate", "seed", "variant", "steps", "updates", "first_hit", "final_best",
               "converged", "converged_step", "sign_changes", "envelope_violations", "error"};
  if (timing) t.columns.push_back("wall_ms");
  auto step_cell = [](const std::optional<std::uint64_t>& s) -> Table::Cell {
    if (s) return *s;
    return std::string("never");
  };
  for (const auto& r : result.rows) {
    std::vector<Table::Cell> row{std::uint64_t{r.replicate}, r.seed, std::string(to_string(r.variant)),
                                 r.steps, r.updates, step_cell(r.first_hit), r.final_best,
                                 r.converged, step_cell(r.converged_step), r.sign_changes,
                                 r.envelope_violations, r.error};
    if (timing) row.emplace_back(r.wall_ms);
    t.rows.push_back(std::move(row));
  }
  return t;
}

BinomialInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<SweepRow> alpha_sweep(const ExperimentConfig& config) {
  config.validate();
  const ObjectivePtr obj = make_objective(config.problem);
  if (!obj->optimum()) {
    throw ConfigError("problem", "alpha sweep needs a problem with a known optimum");
  }
  const std::size_t n = obj->dimension();
  const double phi1 = phi(config.initial_params(n), obj->optimum()->bits);
  const double n_e = static_cast<double>(elite_count(config.rho, config.population));

  std::vector<SweepRow> rows;
  for (double alpha : config.alphas) {
    ExperimentConfig cfg = config;
    cfg.alpha = alpha;
    const ExperimentResult res = run_experiment(cfg, cfg.variant, *obj);
    SweepRow row;
    row.alpha = alpha;
    row.replicates = res.rows.size();
    row.failed = res.failed;
    for (const auto& r : res.rows) row.hits += r.first_hit ? 1 : 0;
    row.hit_rate = static_cast<double>(row.hits) / static_cast<double>(row.replicates);
    row.miss_rate = 1.0 - row.hit_rate;
    row.ci = wilson_interval(row.hits, row.replicates);
    const double alpha1 = alpha / n_e;
    row.miss_bound = alpha1 < 1.0 ? miss_probability_bound(phi1, alpha1, n) : 1.0;
    rows.push_back(row);
  }
  return rows;
}

Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t;
  t.schema = "cem-sweep";
  t.columns = {"alpha", "replicates", "hits", "hit_rate", "ci_low", "ci_high",
               "miss_rate", "miss_bound", "failed"};
  for (const auto& r : rows) {
    t.rows.push_back({r.alpha, std::uint64_t{r.replicates}, std::uint64_t{r.hits}, r.hit_rate, r.ci.lo,
                      r.ci.hi, r.miss_rate, r.miss_bound, std::uint64_t{r.failed}});
  }
  return t;
}

std::vector<CompareRow> compare_variants(const ExperimentConfig& config) {
  const std::uint64_t batch_evals = config.evaluations(Variant::batch);
  const std::uint64_t online_evals = config.evaluations(Variant::window);
  if (batch_evals != online_evals) {
    throw ConfigError("budget", "evaluation budgets differ across variants (batch T*N = " +
                                    std::to_string(batch_evals) + ", online K = " +
                                    std::to_string(online_evals) + ")");
  }
  // Every variant has to be valid, not only the configured one.
  for (auto v : {Variant::batch, Variant::window, Variant::memoryless}) {
    ExperimentConfig cfg = config;
    cfg.variant = v;
    cfg.validate();
  }
  const ObjectivePtr obj = make_objective(config.problem);

  std::vector<CompareRow> rows;
  for (auto v : {Variant::batch, Variant::window, Variant::memoryless}) {
    const ExperimentResult res = run_experiment(config, v, *obj);
    CompareRow row;
    row.variant = v;
    row.evaluations = config.evaluations(v);
    row.replicates = res.rows.size();
    row.failed = res.failed;
    double hit_sum = 0.0;
    double conv_sum = 0.0;
    for (const auto& r : res.rows) {
      if (r.first_hit) {
        ++row.hits;
        hit_sum += static_cast<double>(*r.first_hit);
      }
      if (r.converged_step) {
        ++row.converged;
        conv_sum += static_cast<double>(*r.converged_step);
      }
    }
    row.hit_rate = static_cast<double>(row.hits) / static_cast<double>(row.replicates);
    if (row.hits) row.mean_first_hit = hit_sum / static_cast<double>(row.hits);
    if (row.converged) row.mean_converged_step = conv_sum / static_cast<double>(row.converged);
    rows.push_back(row);
  }
  return rows;
}

Table compare_table(const std::vector<CompareRow>& rows) {
  Table t;
  t.schema = "cem-compare";
  t.columns = {"variant", "evaluations", "replicates", "hits", "hit_rate", "mean_first_hit",
               "converged", "mean_converged_step", "failed"};
  auto opt = [](const std::optional<double>& v) -> Table::Cell {
    if (v) return *v;
    return std::monostate{};
  };
  for (const auto& r : rows) {
    t.rows.push_back({std::string(to_string(r.variant)), r.evaluations, std::uint64_t{r.replicates},
                      std::uint64_t{r.hits}, r.hit_rate, opt(r.mean_first_hit),
                      std::uint64_t{r.converged}, opt(r.mean_converged_step), std::uint64_t{r.failed}});
  }
  return t;
}

Table calibration_table(const ExperimentConfig& config) {
  const auto& c = config.calibration;
  Table t;
  t.schema = "cem-calibration";
  t.columns = {"distribution", "N",           "rho",          "reps",         "mean_gap",
               "gap_stderr",   "theory_gap",  "mean_absdiff", "absdiff_stderr", "theory_absdiff",
               "ratio",        "scheme_delta0", "ratio_over_scheme"};

  const GapEstimate uni = order_gap_mc(ValueDistribution::uniform(0.0, 1.0), c.population, c.rho,
                                       c.reps, config.base_seed, config.jobs);
  const double uni_scheme = delta0_uniform(c.population);
  t.rows.push_back({std::string("uniform"), std::uint64_t{c.population}, c.rho, c.reps,
                    uni.mean_gap, uni.gap_stderr, 1.0 / (static_cast<double>(c.population) + 1.0),
                    uni.mean_absdiff, uni.absdiff_stderr, 1.0 / 3.0, uni.ratio, uni_scheme,
                    uni.ratio / uni_scheme});

  const GapEstimate gauss = order_gap_mc(ValueDistribution::normal(0.0, 1.0), c.population, c.rho,
                                         c.reps, config.base_seed, config.jobs);
  const double gap = gauss_quantile_gap(c.population, c.rho);
  const double scheme = delta0_gauss(c.population, c.rho);
  t.rows.push_back({std::string("normal"), std::uint64_t{c.population}, c.rho, c.reps,
                    gauss.mean_gap, gauss.gap_stderr, gap, gauss.mean_absdiff, gauss.absdiff_stderr,
                    2.0 / std::sqrt(std::numbers::pi), gauss.ratio, scheme, gauss.ratio / scheme});
  return t;
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open output file for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace cem
