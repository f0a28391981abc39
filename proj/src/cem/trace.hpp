#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "cem/core.hpp"

namespace cem {

enum class Variant { batch, window, memoryless };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

inline constexpr double no_threshold = std::numeric_limits<double>::quiet_NaN();

/// Settings shared by all three engines.
struct RunOptions {
  std::size_t snapshot_stride = 0;  // in evaluations; 0 means "N"
  double eps_conv = 1e-6;           // early stop once binary at this eps; 0 disables
  double convergence_eps = 1e-3;    // eps for the reported convergence step
  bool record_steps = true;         // keep one StepRecord per evaluation
};

/// Per-evaluation record. `gamma` is the threshold the sample was tested
/// against (NaN while a window is warming up); `delta` is the memoryless step
/// scale in effect (0 for the other variants).
struct StepRecord {
  double value = 0.0;
  double gamma = no_threshold;
  double delta = 0.0;
  bool elite = false;
};

struct Snapshot {
  std::uint64_t step = 0;     // evaluations completed
  std::uint64_t updates = 0;  // parameter updates applied so far
  BernoulliParams params;
  double gamma = no_threshold;
  double delta = 0.0;
};

struct Improvement {
  std::uint64_t step = 0;  // draw index of the sample
  double value = 0.0;
};

struct RunTrace {
  Variant variant = Variant::batch;
  BernoulliParams p0 = BernoulliParams::uniform(1);
  double step_size = 0.0;  // per-update smoothing weight (alpha, or alpha / ceil(rho N))
  double alpha1 = 0.0;     // alpha / ceil(rho N) for every variant; enters the miss bound

  std::uint64_t steps = 0;
  std::uint64_t updates = 0;
  std::uint64_t elite_samples = 0;

  std::vector<StepRecord> step_log;
  std::vector<Snapshot> snapshots;  // snapshots.front() is p0 at step 0
  std::vector<Improvement> improvements;
  EvaluatedSample best;
  BernoulliParams final_params = BernoulliParams::uniform(1);

  /// Sign changes of Z_{t,i} = p_{t,i} - p_{t-1,i}, zero increments skipped.
  std::vector<std::uint32_t> sign_changes;
  /// First evaluation count after which params were binary at convergence_eps.
  std::optional<std::uint64_t> converged_step;
  bool stopped_early = false;
};

/// Bookkeeping shared by the engines: step log, snapshots, best-so-far,
/// sign changes and convergence detection.
class TraceRecorder {
 public:
  TraceRecorder(Variant variant, const BernoulliParams& p0, double step_size,
                const RunOptions& options, std::size_t default_stride);

  void record_sample(const EvaluatedSample& sample, const StepRecord& record);

  /// Call with the parameters before and after an update.
  void record_update(std::span<const double> before, const BernoulliParams& after);

  /// Call after `count` completed evaluations (and any update they caused).
  /// Returns true when the run should stop early.
  bool end_steps(const BernoulliParams& params, double gamma, double delta,
                 std::uint64_t count = 1);

  RunTrace finish(const BernoulliParams& params, double gamma, double delta);

 private:
  void take_snapshot(const BernoulliParams& params, double gamma, double delta);

  RunTrace trace_;
  RunOptions options_;
  std::size_t stride_;
  std::vector<std::int8_t> last_sign_;
};

}  // namespace cem
