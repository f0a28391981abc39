#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "cem/core.hpp"
#include "cem/rng.hpp"

namespace cem::test {

// f(x) = c for every x.
class ConstantObjective : public Objective {
 public:
  ConstantObjective(std::size_t n, double c) : n_(n), c_(c) {}
  std::size_t dimension() const noexcept override { return n_; }
  std::string name() const override { return "constant"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t>) const override { return c_; }

 private:
  std::size_t n_;
  double c_;
};

// Reads x as a binary number, bit 0 most significant; many distinct values.
class BinaryValueObjective : public Objective {
 public:
  explicit BinaryValueObjective(std::size_t n) : n_(n) {}
  std::size_t dimension() const noexcept override { return n_; }
  std::string name() const override { return "binary-value"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t> bits) const override {
    double v = 0.0;
    for (auto b : bits) v = 2.0 * v + b;
    return v;
  }

 private:
  std::size_t n_;
};

// Ignores x; the i-th call returns the i-th value of a hashed counter in [0, 1).
// The stream is i.i.d. whatever the sampler does.
class CounterNoiseObjective : public Objective {
 public:
  explicit CounterNoiseObjective(std::size_t n) : n_(n) {}
  std::size_t dimension() const noexcept override { return n_; }
  std::string name() const override { return "counter-noise"; }

 protected:
  double evaluate_unchecked(std::span<const std::uint8_t>) const override {
    return static_cast<double>(splitmix64(++calls_) >> 11) * 0x1.0p-53;
  }

 private:
  std::size_t n_;
  mutable std::uint64_t calls_ = 0;
};

inline BitVector bits_of(std::uint64_t mask, std::size_t n) {
  BitVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<std::uint8_t>((mask >> (n - 1 - i)) & 1u);
  return x;
}

}  // namespace cem::test
