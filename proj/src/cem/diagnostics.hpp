#pragma once

#include <optional>
#include <vector>

#include "cem/core.hpp"
#include "cem/trace.hpp"

namespace cem {

/// Probability that one draw from `params` equals `x_star`:
/// prod_i (p_i if x*_i = 1 else 1 - p_i).
double phi(const BernoulliParams& params, std::span<const std::uint8_t> x_star);

struct Envelope {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Reachable range of each p_i after `updates` steps of size alpha1:
///   lo = p0 (1 - alpha1)^u,  hi = lo + 1 - (1 - alpha1)^u.
Envelope param_envelope(const BernoulliParams& p0, double alpha1, std::uint64_t updates);

/// h(alpha1) = sum_{t>=1} (1 - alpha1)^{n t} = 1 / (1 - (1 - alpha1)^n) - 1.
double h_series(double alpha1, std::size_t n);

/// exp(-phi1 h(alpha1)): upper bound on the probability that the optimum is
/// never generated, before the Pr(E_1) = 1 - phi1 factor. DomainError for
/// alpha1 outside (0, 1) or phi1 outside (0, 1].
double miss_probability_bound(double phi1, double alpha1, std::size_t n);

/// Absolute slack allowed when comparing iterated updates with the closed
/// form envelope (accumulated rounding only).
inline constexpr double envelope_tolerance = 1e-12;

struct ConvergenceReport {
  bool converged_binary = false;
  std::optional<std::uint64_t> converged_step;
  BernoulliParams final_params = BernoulliParams::uniform(1);
  bool optimum_known = false;
  bool optimum_generated = false;
  std::optional<std::uint64_t> first_hit_step;  // draw index
  std::vector<std::uint32_t> sign_changes;
  std::uint64_t sign_change_total = 0;
  std::uint64_t envelope_violations = 0;
  std::vector<double> phi_series;  // phi at each snapshot; front() is phi_1 (params p0)
  std::optional<double> miss_bound;
};

/// Fills a report from a completed trace. The envelope is evaluated at the
/// number of updates recorded with each snapshot. Optimum fields stay empty
/// when the objective carries no optimum.
ConvergenceReport analyze(const RunTrace& trace, const Objective& obj, double convergence_eps = 1e-3);

/// First draw index whose value reached the known optimum, if any.
std::optional<std::uint64_t> first_hit(const RunTrace& trace, const Objective& obj);

}  // namespace cem
