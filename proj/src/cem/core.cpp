#include "cem/core.hpp"

#include <algorithm>
#include <cmath>

namespace cem {

namespace {

void check_prob(double p, std::size_t i) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("probability " + std::to_string(i) + " = " + std::to_string(p) +
                      " outside [0, 1]");
  }
}

void check_weight(double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw ArgumentError("step weight outside [0, 1]");
}

template <typename T>
void blend(std::vector<double>& probs, std::span<const T> target, double w) {
  if (target.size() != probs.size()) throw DimensionError(probs.size(), target.size());
  check_weight(w);
  const double keep = 1.0 - w;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    // Clamp guards only against the last-ulp overshoot of keep * p + w * t.
    probs[i] = std::clamp(keep * probs[i] + w * static_cast<double>(target[i]), 0.0, 1.0);
  }
}

}  // namespace

BernoulliParams::BernoulliParams(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ArgumentError("parameter vector must be non-empty");
  for (std::size_t i = 0; i < probs_.size(); ++i) check_prob(probs_[i], i);
}

BernoulliParams BernoulliParams::uniform(std::size_t n, double p) {
  return BernoulliParams(std::vector<double>(n, p));
}

bool BernoulliParams::interior() const noexcept {
  return std::all_of(probs_.begin(), probs_.end(), [](double p) { return p > 0.0 && p < 1.0; });
}

void BernoulliParams::blend_toward(std::span<const double> target, double w) {
  blend(probs_, target, w);
}

void BernoulliParams::blend_toward(std::span<const std::uint8_t> target, double w) {
  blend(probs_, target, w);
}

double Objective::operator()(std::span<const std::uint8_t> bits) const {
  if (bits.size() != dimension()) throw DimensionError(dimension(), bits.size());
  return evaluate_unchecked(bits);
}

void draw_sample_into(const BernoulliParams& params, RngStream& rng, BitVector& out) {
  out.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    out[i] = rng.uniform() < params[i] ? 1 : 0;
  }
}

BitVector draw_sample(const BernoulliParams& params, RngStream& rng) {
  BitVector out;
  draw_sample_into(params, rng, out);
  return out;
}

EvaluatedSample evaluate(const Objective& obj, BitVector bits, std::uint64_t draw_index) {
  const double value = obj(bits);
  return EvaluatedSample{std::move(bits), value, draw_index};
}

bool is_binary_converged(const BernoulliParams& params, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw ArgumentError("eps must lie in (0, 0.5)");
  return std::all_of(params.probs().begin(), params.probs().end(),
                     [eps](double p) { return p <= eps || p >= 1.0 - eps; });
}

std::size_t elite_count(double rho, std::size_t n) {
  const double x = rho * static_cast<double>(n);
  const double nearest = std::round(x);
  const double k = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
  return std::max<std::size_t>(1, static_cast<std::size_t>(k));
}

void validate_cem_settings(std::size_t population, double rho, double alpha,
                           const BernoulliParams& p0) {
  if (population == 0) throw ConfigError("N", "must be a positive integer");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho", "must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("alpha", "must lie in (0, 1]");
  if (!p0.interior()) throw ConfigError("p0", "every entry must lie strictly inside (0, 1)");
}

}  // namespace cem
