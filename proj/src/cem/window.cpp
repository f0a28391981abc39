#include "cem/window.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace cem {

SampleWindow::SampleWindow(std::size_t capacity, double rho)
    : capacity_(capacity), elite_rank_(elite_count(rho, capacity)) {
  if (capacity == 0) throw ArgumentError("window capacity must be positive");
  if (!(rho > 0.0 && rho < 1.0)) throw ArgumentError("rho must lie in (0, 1)");
}

void SampleWindow::push(EvaluatedSample sample) {
  if (!entries_.empty() && sample.draw_index <= entries_.back().draw_index) {
    throw ArgumentError("window entries must have strictly increasing draw indices");
  }
  insert_value(sample.value);
  entries_.push_back(std::move(sample));
}

void SampleWindow::evict_oldest() {
  if (entries_.empty()) throw ArgumentError("evict_oldest on an empty window");
  erase_value(entries_.front().value);
  entries_.pop_front();
}

double SampleWindow::threshold() const {
  if (upper_.size() < elite_rank_) throw ArgumentError("window holds fewer than N_e values");
  return *upper_.begin();
}

double SampleWindow::threshold_by_resort() const {
  if (entries_.size() < elite_rank_) throw ArgumentError("window holds fewer than N_e values");
  std::vector<double> values;
  values.reserve(entries_.size());
  for (const auto& e : entries_) values.push_back(e.value);
  std::sort(values.begin(), values.end(), std::greater<>{});
  return values[elite_rank_ - 1];
}

void SampleWindow::insert_value(double v) {
  // Invariant: every value in upper_ >= every value in lower_, and
  // |upper_| = min(size, N_e).
  upper_.insert(v);
  if (upper_.size() > elite_rank_) {
    lower_.insert(*upper_.begin());
    upper_.erase(upper_.begin());
  }
}

void SampleWindow::erase_value(double v) {
  // Equal values are interchangeable for the threshold, so any stored copy
  // of v may be removed.
  if (!lower_.empty() && v <= *lower_.rbegin()) {
    lower_.erase(lower_.find(v));
    return;
  }
  upper_.erase(upper_.find(v));
  if (!lower_.empty()) {
    const auto top = std::prev(lower_.end());
    upper_.insert(*top);
    lower_.erase(top);
  }
}

WindowDecision window_step(SampleWindow& window, const EvaluatedSample& x_new,
                           bool check_against_resort) {
  if (window.size() <= window.capacity()) return {};
  window.evict_oldest();
  const double gamma = window.threshold();
  if (check_against_resort && gamma != window.threshold_by_resort()) {
    throw Error(ErrorCode::runtime, "incremental window threshold disagrees with full re-sort");
  }
  return {gamma, x_new.value >= gamma};
}

BernoulliParams online_update(std::span<const std::uint8_t> x, const BernoulliParams& params,
                              double alpha1) {
  if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw ArgumentError("alpha1 must lie in (0, 1]");
  BernoulliParams next = params;
  next.blend_toward(x, alpha1);
  return next;
}

void OnlineConfig::validate() const {
  validate_cem_settings(window, rho, alpha, p0);
}

double OnlineConfig::step_size() const {
  return alpha / static_cast<double>(elite_count(rho, window));
}

RunTrace run_online_window(const OnlineConfig& config, const Objective& obj, RngStream& rng) {
  config.validate();
  if (config.p0.size() != obj.dimension()) throw DimensionError(obj.dimension(), config.p0.size());

  const double alpha1 = config.step_size();
  TraceRecorder recorder(Variant::window, config.p0, alpha1, config.options, config.window);
  SampleWindow window(config.window, config.rho);
  BernoulliParams params = config.p0;
  std::vector<double> before;
  BitVector bits;
  double gamma = no_threshold;

  for (std::size_t t = 0; t < config.samples; ++t) {
    draw_sample_into(params, rng, bits);
    EvaluatedSample sample = evaluate(obj, bits, t);
    window.push(sample);
    const WindowDecision decision = window_step(window, sample, config.check_against_resort);
    gamma = decision.gamma.value_or(no_threshold);
    recorder.record_sample(sample, {sample.value, gamma, 0.0, decision.is_elite});

    if (decision.is_elite) {
      before.assign(params.probs().begin(), params.probs().end());
      params.blend_toward(std::span<const std::uint8_t>(sample.bits), alpha1);
      recorder.record_update(before, params);
    }
    if (recorder.end_steps(params, gamma, 0.0)) break;
  }
  return recorder.finish(params, gamma, 0.0);
}

}  // namespace cem
