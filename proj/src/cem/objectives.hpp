#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cem/core.hpp"

namespace cem {

enum class ProblemKind { onemax, leading_ones, weighted_linear, trap_k, maxcut };

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view name);

struct WeightedEdge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::onemax;
  std::size_t n = 0;
  std::vector<double> weights;      // weighted_linear
  std::size_t k = 0;                // trap_k block size
  std::vector<WeightedEdge> edges;  // maxcut
  bool minimize = false;            // wraps the objective in a negation
};

/// Largest dimension for which exhaustive enumeration is attempted.
inline constexpr std::size_t max_enumeration_dimension = 24;
/// MaxCut instances up to this size get their optimum filled by enumeration.
inline constexpr std::size_t maxcut_enumeration_limit = 20;

/// Builds the objective described by `spec`. Throws ConfigError naming the
/// offending field when `spec` is invalid.
ObjectivePtr make_objective(const ProblemSpec& spec);

/// Exhaustive maximization. Ties go to the lexicographically smallest bit
/// vector (bit 0 most significant). Throws CapacityError for n > 24.
KnownOptimum enumerate_optimum(const Objective& obj);

/// -f(x); turns a minimization problem into the maximization the engines expect.
ObjectivePtr negate(ObjectivePtr inner);

}  // namespace cem
