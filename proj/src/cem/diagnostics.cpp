#include "cem/diagnostics.hpp"

#include <cmath>
#include <numeric>

namespace cem {

double phi(const BernoulliParams& params, std::span<const std::uint8_t> x_star) {
  if (x_star.size() != params.size()) throw DimensionError(params.size(), x_star.size());
  double prob = 1.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    prob *= x_star[i] ? params[i] : 1.0 - params[i];
  }
  return prob;
}

Envelope param_envelope(const BernoulliParams& p0, double alpha1, std::uint64_t updates) {
  if (!(alpha1 > 0.0 && alpha1 <= 1.0)) throw ArgumentError("alpha1 must lie in (0, 1]");
  const double decay = std::pow(1.0 - alpha1, static_cast<double>(updates));
  Envelope env;
  env.lo.resize(p0.size());
  env.hi.resize(p0.size());
  for (std::size_t i = 0; i < p0.size(); ++i) {
    env.lo[i] = p0[i] * decay;
    env.hi[i] = env.lo[i] + (1.0 - decay);
  }
  return env;
}

double h_series(double alpha1, std::size_t n) {
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) {
    throw DomainError("h(alpha1) requires alpha1 in (0, 1); it diverges as alpha1 -> 0");
  }
  if (n == 0) throw DomainError("n must be positive");
  // 1 - (1 - a)^n computed as -expm1(n log1p(-a)) to keep precision for small a.
  const double one_minus = -std::expm1(static_cast<double>(n) * std::log1p(-alpha1));
  return 1.0 / one_minus - 1.0;
}

double miss_probability_bound(double phi1, double alpha1, std::size_t n) {
  if (!(phi1 > 0.0 && phi1 <= 1.0)) throw DomainError("phi1 must lie in (0, 1]");
  return std::exp(-phi1 * h_series(alpha1, n));
}

std::optional<std::uint64_t> first_hit(const RunTrace& trace, const Objective& obj) {
  const auto& opt = obj.optimum();
  if (!opt) return std::nullopt;
  for (const auto& imp : trace.improvements) {
    if (imp.value >= opt->value) return imp.step;
  }
  return std::nullopt;
}

ConvergenceReport analyze(const RunTrace& trace, const Objective& obj, double convergence_eps) {
  ConvergenceReport report;
  report.final_params = trace.final_params;
  report.converged_binary = is_binary_converged(trace.final_params, convergence_eps);
  report.converged_step = trace.converged_step;
  report.sign_changes = trace.sign_changes;
  report.sign_change_total =
      std::accumulate(trace.sign_changes.begin(), trace.sign_changes.end(), std::uint64_t{0});

  for (const auto& snap : trace.snapshots) {
    const Envelope env = param_envelope(trace.p0, trace.step_size, snap.updates);
    for (std::size_t i = 0; i < snap.params.size(); ++i) {
      if (snap.params[i] < env.lo[i] - envelope_tolerance ||
          snap.params[i] > env.hi[i] + envelope_tolerance) {
        ++report.envelope_violations;
      }
    }
  }

  const auto& opt = obj.optimum();
  if (opt) {
    report.optimum_known = true;
    report.first_hit_step = first_hit(trace, obj);
    report.optimum_generated = report.first_hit_step.has_value();
    report.phi_series.reserve(trace.snapshots.size());
    for (const auto& snap : trace.snapshots) report.phi_series.push_back(phi(snap.params, opt->bits));
    const double phi1 = phi(trace.p0, opt->bits);
    if (phi1 > 0.0 && trace.alpha1 > 0.0 && trace.alpha1 < 1.0) {
      report.miss_bound = miss_probability_bound(phi1, trace.alpha1, trace.p0.size());
    }
  }
  return report;
}

}  // namespace cem
