#include "cem/objectives.hpp"

#include <algorithm>
#include <numeric>

namespace cem {

namespace {

class OneMax final : public Objective {
 public:
  explicit OneMax(std::size_t n) : n_(n) {
    set_optimum({BitVector(n, 1), static_cast<double>(n)});
  }
  std::size_t dimension() const noexcept override { return n_; }
  std::string name() const override { return "onemax"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t> bits) const override {
    return static_cast<double>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
  }

 private:
  std::size_t n_;
};

class LeadingOnes final : public Objective {
 public:
  explicit LeadingOnes(std::size_t n) : n_(n) {
    set_optimum({BitVector(n, 1), static_cast<double>(n)});
  }
  std::size_t dimension() const noexcept override { return n_; }
  std::string name() const override { return "leading_ones"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t> bits) const override {
    const auto first_zero = std::find(bits.begin(), bits.end(), std::uint8_t{0});
    return static_cast<double>(first_zero - bits.begin());
  }

 private:
  std::size_t n_;
};

class WeightedLinear final : public Objective {
 public:
  explicit WeightedLinear(std::vector<double> weights) : weights_(std::move(weights)) {
    // Maximizer: set exactly the positive-weight bits (zero weights stay 0,
    // which is also the lexicographically smallest choice).
    BitVector best(weights_.size());
    for (std::size_t i = 0; i < weights_.size(); ++i) best[i] = weights_[i] > 0.0 ? 1 : 0;
    const double value = evaluate_unchecked(best);
    set_optimum({std::move(best), value});
  }
  std::size_t dimension() const noexcept override { return weights_.size(); }
  std::string name() const override { return "weighted_linear"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t> bits) const override {
    double sum = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i]) sum += weights_[i];
    }
    return sum;
  }

 private:
  std::vector<double> weights_;
};

// Concatenated deceptive traps: a block of k bits scores k when all ones,
// otherwise k - 1 - (number of ones).
class Trap final : public Objective {
 public:
  Trap(std::size_t n, std::size_t k) : n_(n), k_(k) {
    set_optimum({BitVector(n, 1), static_cast<double>(n)});
  }
  std::size_t dimension() const noexcept override { return n_; }
  std::string name() const override { return "trap_k"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t> bits) const override {
    double total = 0.0;
    for (std::size_t start = 0; start < n_; start += k_) {
      const auto block = bits.subspan(start, k_);
      const auto ones = static_cast<std::size_t>(std::count(block.begin(), block.end(), std::uint8_t{1}));
      total += ones == k_ ? static_cast<double>(k_) : static_cast<double>(k_ - 1 - ones);
    }
    return total;
  }

 private:
  std::size_t n_;
  std::size_t k_;
};

class MaxCut final : public Objective {
 public:
  MaxCut(std::size_t n, std::vector<WeightedEdge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ <= maxcut_enumeration_limit) set_optimum(enumerate_optimum(*this));
  }
  std::size_t dimension() const noexcept override { return n_; }
  std::string name() const override { return "maxcut"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t> bits) const override {
    double cut = 0.0;
    for (const auto& e : edges_) {
      if (bits[e.u] != bits[e.v]) cut += e.weight;
    }
    return cut;
  }

 private:
  std::size_t n_;
  std::vector<WeightedEdge> edges_;
};

class Negated final : public Objective {
 public:
  explicit Negated(ObjectivePtr inner) : inner_(std::move(inner)) {
    if (inner_->dimension() <= maxcut_enumeration_limit) set_optimum(enumerate_optimum(*this));
  }
  std::size_t dimension() const noexcept override { return inner_->dimension(); }
  std::string name() const override { return "neg(" + inner_->name() + ")"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t> bits) const override {
    return -(*inner_)(bits);
  }

 private:
  ObjectivePtr inner_;
};

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::onemax: return "onemax";
    case ProblemKind::leading_ones: return "leading_ones";
    case ProblemKind::weighted_linear: return "weighted_linear";
    case ProblemKind::trap_k: return "trap_k";
    case ProblemKind::maxcut: return "maxcut";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view name) {
  for (auto kind : {ProblemKind::onemax, ProblemKind::leading_ones, ProblemKind::weighted_linear,
                    ProblemKind::trap_k, ProblemKind::maxcut}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError("problem.kind",
                    "unknown kind '" + std::string(name) +
                        "' (expected onemax, leading_ones, weighted_linear, trap_k or maxcut)");
}

ObjectivePtr make_objective(const ProblemSpec& spec) {
  ObjectivePtr obj;
  switch (spec.kind) {
    case ProblemKind::onemax:
    case ProblemKind::leading_ones:
      if (spec.n == 0) throw ConfigError("problem.n", "must be positive");
      if (spec.kind == ProblemKind::onemax) {
        obj = std::make_shared<OneMax>(spec.n);
      } else {
        obj = std::make_shared<LeadingOnes>(spec.n);
      }
      break;
    case ProblemKind::weighted_linear:
      if (spec.weights.empty()) throw ConfigError("problem.weights", "must be non-empty");
      if (spec.n != 0 && spec.n != spec.weights.size()) {
        throw ConfigError("problem.weights", "length must equal problem.n");
      }
      obj = std::make_shared<WeightedLinear>(spec.weights);
      break;
    case ProblemKind::trap_k:
      if (spec.n == 0) throw ConfigError("problem.n", "must be positive");
      if (spec.k == 0) throw ConfigError("problem.k", "must be positive");
      if (spec.n % spec.k != 0) throw ConfigError("problem.k", "must divide problem.n");
      obj = std::make_shared<Trap>(spec.n, spec.k);
      break;
    case ProblemKind::maxcut:
      if (spec.n == 0) throw ConfigError("problem.n", "must be positive");
      if (spec.edges.empty()) throw ConfigError("problem.edges", "must be non-empty");
      for (const auto& e : spec.edges) {
        if (e.u >= spec.n || e.v >= spec.n) {
          throw ConfigError("problem.edges", "endpoint out of range [0, n)");
        }
        if (e.u == e.v) throw ConfigError("problem.edges", "self-loop");
      }
      obj = std::make_shared<MaxCut>(spec.n, spec.edges);
      break;
  }
  return spec.minimize ? negate(std::move(obj)) : obj;
}

KnownOptimum enumerate_optimum(const Objective& obj) {
  const std::size_t n = obj.dimension();
  if (n > max_enumeration_dimension) {
    throw CapacityError("enumeration refused: n = " + std::to_string(n) + " exceeds " +
                        std::to_string(max_enumeration_dimension));
  }
  BitVector bits(n, 0);
  KnownOptimum best{bits, obj(bits)};
  const std::uint64_t count = std::uint64_t{1} << n;
  // Masks are visited in increasing order with bit 0 as the most significant
  // position, i.e. lexicographic order; strict improvement keeps the first.
  for (std::uint64_t mask = 1; mask < count; ++mask) {
    for (std::size_t i = 0; i < n; ++i) bits[i] = (mask >> (n - 1 - i)) & 1U;
    const double v = obj(bits);
    if (v > best.value) best = {bits, v};
  }
  return best;
}

ObjectivePtr negate(ObjectivePtr inner) { return std::make_shared<Negated>(std::move(inner)); }

}  // namespace cem
