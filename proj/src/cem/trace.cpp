#include "cem/trace.hpp"

#include <string>

namespace cem {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::batch: return "batch";
    case Variant::window: return "window";
    case Variant::memoryless: return "memoryless";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (auto v : {Variant::batch, Variant::window, Variant::memoryless}) {
    if (name == to_string(v)) return v;
  }
  throw ConfigError("variant", "unknown variant '" + std::string(name) +
                                   "' (expected batch, window or memoryless)");
}

TraceRecorder::TraceRecorder(Variant variant, const BernoulliParams& p0, double step_size,
                             const RunOptions& options, std::size_t default_stride)
    : options_(options),
      stride_(options.snapshot_stride ? options.snapshot_stride : default_stride),
      last_sign_(p0.size(), 0) {
  if (stride_ == 0) stride_ = 1;
  trace_.variant = variant;
  trace_.p0 = p0;
  trace_.step_size = step_size;
  trace_.alpha1 = step_size;
  trace_.final_params = p0;
  trace_.sign_changes.assign(p0.size(), 0);
  trace_.best.value = -std::numeric_limits<double>::infinity();
  take_snapshot(p0, no_threshold, 0.0);
}

void TraceRecorder::record_sample(const EvaluatedSample& sample, const StepRecord& record) {
  if (options_.record_steps) trace_.step_log.push_back(record);
  if (record.elite) ++trace_.elite_samples;
  if (trace_.improvements.empty() || sample.value > trace_.best.value) {
    trace_.best = sample;
    trace_.improvements.push_back({sample.draw_index, sample.value});
  }
}

void TraceRecorder::record_update(std::span<const double> before, const BernoulliParams& after) {
  ++trace_.updates;
  for (std::size_t i = 0; i < before.size(); ++i) {
    const double z = after[i] - before[i];
    if (z == 0.0) continue;
    const std::int8_t sign = z > 0.0 ? 1 : -1;
    if (last_sign_[i] != 0 && sign != last_sign_[i]) ++trace_.sign_changes[i];
    last_sign_[i] = sign;
  }
}

bool TraceRecorder::end_steps(const BernoulliParams& params, double gamma, double delta,
                              std::uint64_t count) {
  const std::uint64_t before = trace_.steps / stride_;
  trace_.steps += count;
  if (trace_.steps / stride_ != before) take_snapshot(params, gamma, delta);
  if (!trace_.converged_step && is_binary_converged(params, options_.convergence_eps)) {
    trace_.converged_step = trace_.steps;
  }
  if (options_.eps_conv > 0.0 && is_binary_converged(params, options_.eps_conv)) {
    trace_.stopped_early = true;
    return true;
  }
  return false;
}

RunTrace TraceRecorder::finish(const BernoulliParams& params, double gamma, double delta) {
  if (trace_.snapshots.back().step != trace_.steps) take_snapshot(params, gamma, delta);
  trace_.final_params = params;
  return std::move(trace_);
}

void TraceRecorder::take_snapshot(const BernoulliParams& params, double gamma, double delta) {
  trace_.snapshots.push_back({trace_.steps, trace_.updates, params, gamma, delta});
}

}  // namespace cem
