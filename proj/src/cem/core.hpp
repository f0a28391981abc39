#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cem/errors.hpp"
#include "cem/rng.hpp"

namespace cem {

/// Dense 0/1 vector; one byte per bit.
using BitVector = std::vector<std::uint8_t>;

/// Parameter vector of a product of independent Bernoulli distributions.
/// Every entry is kept in [0, 1]; construction rejects anything else.
class BernoulliParams {
 public:
  explicit BernoulliParams(std::vector<double> probs);

  /// (p, p, ..., p) of dimension n.
  static BernoulliParams uniform(std::size_t n, double p = 0.5);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const noexcept { return probs_; }

  /// True when every entry lies strictly inside (0, 1).
  bool interior() const noexcept;

  /// In-place convex step toward `target`: p <- (1 - w) p + w target.
  /// Throws on dimension mismatch or w outside [0, 1].
  void blend_toward(std::span<const double> target, double w);
  void blend_toward(std::span<const std::uint8_t> target, double w);

  bool operator==(const BernoulliParams&) const = default;

 private:
  std::vector<double> probs_;
};

/// Sampled bit vector with its cached objective value.
struct EvaluatedSample {
  BitVector bits;
  double value = 0.0;
  std::uint64_t draw_index = 0;
};

struct KnownOptimum {
  BitVector bits;
  double value = 0.0;
};

/// Deterministic pseudo-boolean objective f: {0,1}^n -> R, maximized.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual std::size_t dimension() const noexcept = 0;
  virtual std::string name() const = 0;

  /// Checked evaluation; throws DimensionError on a length mismatch.
  double operator()(std::span<const std::uint8_t> bits) const;

  const std::optional<KnownOptimum>& optimum() const noexcept { return optimum_; }

 protected:
  virtual double evaluate_unchecked(std::span<const std::uint8_t> bits) const = 0;
  void set_optimum(KnownOptimum opt) { optimum_ = std::move(opt); }

 private:
  std::optional<KnownOptimum> optimum_;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

/// Draws x with P(x_i = 1) = probs[i], independently; consumes one uniform per bit.
BitVector draw_sample(const BernoulliParams& params, RngStream& rng);

/// In-place variant that reuses `out`'s storage.
void draw_sample_into(const BernoulliParams& params, RngStream& rng, BitVector& out);

EvaluatedSample evaluate(const Objective& obj, BitVector bits, std::uint64_t draw_index = 0);

/// True iff every entry is <= eps or >= 1 - eps. Requires eps in (0, 0.5).
bool is_binary_converged(const BernoulliParams& params, double eps);

/// Elite count ceil(rho * n), tolerant of the rounding in rho * n
/// (0.07 * 100 must give 7, not 8). Always at least 1.
std::size_t elite_count(double rho, std::size_t n);

/// Shared range checks for N, rho, alpha and p0 (N >= 1, rho in (0,1),
/// alpha in (0,1], p0 strictly inside (0,1)); throws ConfigError.
void validate_cem_settings(std::size_t population, double rho, double alpha,
                           const BernoulliParams& p0);

}  // namespace cem
