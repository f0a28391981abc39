#include "cem/cem.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "cem/harness.hpp"
#include "cem/normal.hpp"

struct cem_config {
  cem::ExperimentConfig value;
};

struct cem_objective {
  cem::ObjectivePtr value;
};

struct cem_run {
  cem::RunTrace trace;
  cem::ObjectivePtr objective;
  double convergence_eps = 1e-3;
};

struct cem_text {
  std::string value;
};

namespace {

thread_local std::string last_error;

cem_status fail(cem_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
cem_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return CEM_OK;
  } catch (const cem::Error& e) {
    return fail(static_cast<cem_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(CEM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(CEM_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(CEM_ERR_RUNTIME, "unknown error");
  }
}

void require(const void* p, const char* what) {
  if (!p) throw cem::ArgumentError(std::string(what) + " must not be null");
}

cem::Variant to_variant(cem_variant v) {
  switch (v) {
    case CEM_VARIANT_BATCH: return cem::Variant::batch;
    case CEM_VARIANT_WINDOW: return cem::Variant::window;
    case CEM_VARIANT_MEMORYLESS: return cem::Variant::memoryless;
  }
  throw cem::ArgumentError("unknown variant");
}

cem::OutputFormat to_format(cem_format f) {
  if (f == CEM_FORMAT_CSV) return cem::OutputFormat::csv;
  if (f == CEM_FORMAT_JSON) return cem::OutputFormat::json;
  throw cem::ArgumentError("unknown format");
}

void emit(cem_text** out, std::string text) {
  *out = new cem_text{std::move(text)};
}

nlohmann::ordered_json report_json(const cem_run& run) {
  const cem::ConvergenceReport r = cem::analyze(run.trace, *run.objective, run.convergence_eps);
  nlohmann::ordered_json j;
  j["variant"] = std::string(cem::to_string(run.trace.variant));
  j["steps"] = run.trace.steps;
  j["updates"] = run.trace.updates;
  j["best_value"] = run.trace.best.value;
  j["converged_binary"] = r.converged_binary;
  j["converged_step"] = r.converged_step ? nlohmann::ordered_json(*r.converged_step) : nullptr;
  j["final_params"] = std::vector<double>(r.final_params.probs().begin(), r.final_params.probs().end());
  j["optimum_known"] = r.optimum_known;
  j["optimum_generated"] = r.optimum_generated;
  j["first_hit_step"] = r.first_hit_step ? nlohmann::ordered_json(*r.first_hit_step) : nullptr;
  j["sign_changes"] = r.sign_changes;
  j["envelope_violations"] = r.envelope_violations;
  j["phi_series"] = r.phi_series;
  j["miss_bound"] = r.miss_bound ? nlohmann::ordered_json(*r.miss_bound) : nullptr;
  return j;
}

}  // namespace

extern "C" {

const char* cem_version(void) { return "1.0.0"; }

const char* cem_status_name(cem_status status) {
  switch (status) {
    case CEM_OK: return "ok";
    case CEM_ERR_ARGUMENT: return "argument error";
    case CEM_ERR_DIMENSION: return "dimension error";
    case CEM_ERR_DOMAIN: return "domain error";
    case CEM_ERR_CAPACITY: return "capacity error";
    case CEM_ERR_CONFIG: return "config error";
    case CEM_ERR_IO: return "I/O error";
    case CEM_ERR_RUNTIME: return "runtime error";
  }
  return "unknown status";
}

const char* cem_last_error(void) { return last_error.c_str(); }

const char* cem_text_data(const cem_text* text) { return text ? text->value.c_str() : ""; }

size_t cem_text_size(const cem_text* text) { return text ? text->value.size() : 0; }

cem_status cem_text_write(const cem_text* text, const char* path) {
  return guarded([&] {
    require(text, "text");
    require(path, "path");
    cem::write_text_file(path, text->value);
  });
}

void cem_text_free(cem_text* text) { delete text; }

cem_status cem_config_default(cem_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new cem_config{};
  });
}

cem_status cem_config_parse(const char* json_text, cem_config** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = new cem_config{cem::parse_config(json_text)};
  });
}

cem_status cem_config_load(const char* path, cem_config** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new cem_config{cem::load_config(path)};
  });
}

void cem_config_free(cem_config* config) { delete config; }

cem_status cem_config_set_seed(cem_config* config, uint64_t base_seed) {
  return guarded([&] {
    require(config, "config");
    config->value.base_seed = base_seed;
  });
}

cem_status cem_config_set_jobs(cem_config* config, unsigned jobs) {
  return guarded([&] {
    require(config, "config");
    config->value.jobs = jobs;
  });
}

cem_status cem_config_set_format(cem_config* config, cem_format format) {
  return guarded([&] {
    require(config, "config");
    config->value.format = to_format(format);
  });
}

cem_status cem_config_set_output(cem_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    config->value.output_path = path ? path : "";
  });
}

cem_status cem_config_set_timing(cem_config* config, int enabled) {
  return guarded([&] {
    require(config, "config");
    config->value.timing = enabled != 0;
  });
}

cem_format cem_config_format(const cem_config* config) {
  return config && config->value.format == cem::OutputFormat::json ? CEM_FORMAT_JSON : CEM_FORMAT_CSV;
}

const char* cem_config_output(const cem_config* config) {
  return config ? config->value.output_path.c_str() : "";
}

cem_status cem_config_dump(const cem_config* config, cem_text** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    emit(out, cem::dump_config(config->value));
  });
}

cem_status cem_run_experiment(const cem_config* config, cem_text** out, size_t* failed) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const cem::ExperimentResult result = cem::run_experiment(config->value);
    if (failed) *failed = result.failed;
    emit(out, cem::results_table(result, config->value.timing).render(config->value.format));
  });
}

cem_status cem_sweep_alpha(const cem_config* config, cem_text** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    emit(out, cem::sweep_table(cem::alpha_sweep(config->value)).render(config->value.format));
  });
}

cem_status cem_compare_variants(const cem_config* config, cem_text** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    emit(out, cem::compare_table(cem::compare_variants(config->value)).render(config->value.format));
  });
}

cem_status cem_calibrate_delta0(const cem_config* config, cem_text** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    config->value.validate();
    emit(out, cem::calibration_table(config->value).render(config->value.format));
  });
}

cem_status cem_objective_create(const cem_config* config, cem_objective** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    *out = new cem_objective{cem::make_objective(config->value.problem)};
  });
}

void cem_objective_free(cem_objective* objective) { delete objective; }

size_t cem_objective_dimension(const cem_objective* objective) {
  return objective ? objective->value->dimension() : 0;
}

cem_status cem_objective_evaluate(const cem_objective* objective, const uint8_t* bits, size_t n,
                                  double* value) {
  return guarded([&] {
    require(objective, "objective");
    require(bits, "bits");
    require(value, "value");
    *value = (*objective->value)(std::span<const std::uint8_t>(bits, n));
  });
}

cem_status cem_objective_optimum(const cem_objective* objective, uint8_t* bits, size_t n,
                                 double* value) {
  return guarded([&] {
    require(objective, "objective");
    const auto& opt = objective->value->optimum();
    if (!opt) throw cem::ArgumentError("objective has no known optimum");
    if (n != opt->bits.size()) throw cem::DimensionError(opt->bits.size(), n);
    if (bits) std::copy(opt->bits.begin(), opt->bits.end(), bits);
    if (value) *value = opt->value;
  });
}

cem_status cem_objective_enumerate(const cem_objective* objective, uint8_t* bits, size_t n,
                                   double* value) {
  return guarded([&] {
    require(objective, "objective");
    if (n != objective->value->dimension()) throw cem::DimensionError(objective->value->dimension(), n);
    const cem::KnownOptimum best = cem::enumerate_optimum(*objective->value);
    if (bits) std::copy(best.bits.begin(), best.bits.end(), bits);
    if (value) *value = best.value;
  });
}

cem_status cem_run_single(const cem_config* config, cem_variant variant, uint64_t seed,
                          cem_run** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    cem::ExperimentConfig cfg = config->value;
    cfg.variant = to_variant(variant);
    cfg.validate();
    auto run = std::make_unique<cem_run>();
    run->objective = cem::make_objective(cfg.problem);
    run->trace = cem::run_variant(cfg, cfg.variant, *run->objective, seed);
    run->convergence_eps = cfg.convergence_eps;
    *out = run.release();
  });
}

void cem_run_free(cem_run* run) { delete run; }

uint64_t cem_run_steps(const cem_run* run) { return run ? run->trace.steps : 0; }

uint64_t cem_run_updates(const cem_run* run) { return run ? run->trace.updates : 0; }

double cem_run_best_value(const cem_run* run) { return run ? run->trace.best.value : 0.0; }

cem_status cem_run_final_params(const cem_run* run, double* probs, size_t n) {
  return guarded([&] {
    require(run, "run");
    require(probs, "probs");
    const auto p = run->trace.final_params.probs();
    if (n != p.size()) throw cem::DimensionError(p.size(), n);
    std::copy(p.begin(), p.end(), probs);
  });
}

cem_status cem_run_report(const cem_run* run, cem_text** out) {
  return guarded([&] {
    require(run, "run");
    require(out, "out");
    emit(out, report_json(*run).dump(2) + "\n");
  });
}

cem_status cem_normal_quantile(double p, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = cem::normal_quantile(p);
  });
}

cem_status cem_delta0_uniform(size_t population, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = cem::delta0_uniform(population);
  });
}

cem_status cem_delta0_gauss(size_t population, double rho, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = cem::delta0_gauss(population, rho);
  });
}

cem_status cem_miss_probability_bound(double phi1, double alpha1, size_t n, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = cem::miss_probability_bound(phi1, alpha1, n);
  });
}

cem_status cem_phi(const double* probs, const uint8_t* x_star, size_t n, double* out) {
  return guarded([&] {
    require(probs, "probs");
    require(x_star, "x_star");
    require(out, "out");
    const cem::BernoulliParams params(std::vector<double>(probs, probs + n));
    *out = cem::phi(params, std::span<const std::uint8_t>(x_star, n));
  });
}

}  // extern "C"
