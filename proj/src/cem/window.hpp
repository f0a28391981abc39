#pragma once

#include <deque>
#include <optional>
#include <set>

#include "cem/core.hpp"
#include "cem/trace.hpp"

namespace cem {

/// FIFO of the last N evaluated samples plus an order-statistic index over
/// their values. The index is split at the elite rank N_e = ceil(rho N):
/// `upper_` holds the N_e largest values and `lower_` the rest, so the
/// threshold is min(upper_) and each insertion or eviction costs O(log N).
class SampleWindow {
 public:
  SampleWindow(std::size_t capacity, double rho);

  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t elite_rank() const noexcept { return elite_rank_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::deque<EvaluatedSample>& entries() const noexcept { return entries_; }

  /// Appends a sample (may temporarily hold capacity + 1 entries).
  void push(EvaluatedSample sample);

  /// Removes the oldest entry.
  void evict_oldest();

  /// N_e-th largest stored value; requires size() >= elite_rank().
  double threshold() const;

  /// Same quantity by copying and fully sorting the stored values.
  double threshold_by_resort() const;

 private:
  void insert_value(double v);
  void erase_value(double v);

  std::size_t capacity_;
  std::size_t elite_rank_;
  std::deque<EvaluatedSample> entries_;
  std::multiset<double> upper_;
  std::multiset<double> lower_;
};

struct WindowDecision {
  std::optional<double> gamma;  // empty during warm-up
  bool is_elite = false;
};

/// One step of the sliding-window rule, called after `x_new` has been pushed:
/// while the window holds <= N entries nothing happens (warm-up); otherwise
/// the oldest entry is evicted, gamma is the ceil(rho N)-th largest of the N
/// remaining values, and the newest sample is elite iff its value >= gamma.
/// When `check_against_resort` is set, the incremental threshold is compared
/// with a full re-sort and a mismatch throws.
WindowDecision window_step(SampleWindow& window, const EvaluatedSample& x_new,
                           bool check_against_resort = false);

/// Single-sample smoothed update p <- (1 - alpha1) p + alpha1 x.
BernoulliParams online_update(std::span<const std::uint8_t> x, const BernoulliParams& params,
                              double alpha1);

struct OnlineConfig {
  std::size_t window = 100;  // N
  double rho = 0.1;
  double alpha = 0.7;
  std::size_t samples = 5000;  // K
  BernoulliParams p0 = BernoulliParams::uniform(1);
  RunOptions options;
  bool check_against_resort = false;

  void validate() const;
  /// alpha / ceil(rho N).
  double step_size() const;
};

RunTrace run_online_window(const OnlineConfig& config, const Objective& obj, RngStream& rng);

}  // namespace cem
