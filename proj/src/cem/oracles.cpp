#include "cem/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "cem/parallel.hpp"

namespace cem {

namespace {

constexpr std::uint64_t chunk_count = 64;
constexpr std::uint64_t absdiff_stream_offset = 1'000'003;

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
};

struct ChunkResult {
  Moments gap;
  Moments absdiff;
};

double mean_of(const Moments& m, std::uint64_t n) { return m.sum / static_cast<double>(n); }

double stderr_of(const Moments& m, std::uint64_t n) {
  const double count = static_cast<double>(n);
  const double mean = m.sum / count;
  const double var = std::max(0.0, (m.sum_sq - count * mean * mean) / (count - 1.0));
  return std::sqrt(var / count);
}

}  // namespace

GapEstimate order_gap_mc(const ValueDistribution& dist, std::size_t population, double rho,
                         std::uint64_t reps, std::uint64_t seed, unsigned jobs) {
  if (!(rho > 0.0 && rho < 1.0)) throw ArgumentError("rho must lie in (0, 1)");
  const std::size_t n_e = elite_count(rho, population);
  if (n_e >= population) throw ArgumentError("need ceil(rho N) < N for an order-statistic gap");
  if (reps < min_oracle_reps) throw ArgumentError("reps must be at least 10^4");
  if (!(dist.b > 0.0) && dist.kind == ValueDistribution::Kind::normal) {
    throw ArgumentError("normal sigma must be positive");
  }

  const RngStream root(seed);
  std::vector<ChunkResult> chunks(chunk_count);
  parallel_for(chunk_count, jobs, [&](std::uint64_t c) {
    const std::uint64_t begin = reps * c / chunk_count;
    const std::uint64_t end = reps * (c + 1) / chunk_count;
    ChunkResult& out = chunks[c];

    RngStream gap_rng = root.substream(c);
    std::vector<double> batch(population);
    const auto nth = batch.begin() + static_cast<std::ptrdiff_t>(n_e);
    for (std::uint64_t r = begin; r < end; ++r) {
      for (auto& v : batch) v = dist.draw(gap_rng);
      // After this, batch[n_e] is the (n_e + 1)-th largest and batch[0, n_e)
      // holds the n_e largest.
      std::nth_element(batch.begin(), nth, batch.end(), std::greater<>{});
      const double at_rank = *std::min_element(batch.begin(), nth);
      out.gap.add(at_rank - *nth);
    }

    RngStream pair_rng = root.substream(absdiff_stream_offset + c);
    for (std::uint64_t r = begin; r < end; ++r) {
      const double x = dist.draw(pair_rng);
      const double y = dist.draw(pair_rng);
      out.absdiff.add(std::abs(x - y));
    }
  });

  Moments gap;
  Moments absdiff;
  for (const auto& c : chunks) {
    gap.sum += c.gap.sum;
    gap.sum_sq += c.gap.sum_sq;
    absdiff.sum += c.absdiff.sum;
    absdiff.sum_sq += c.absdiff.sum_sq;
  }
  GapEstimate est;
  est.samples = reps;
  est.mean_gap = mean_of(gap, reps);
  est.mean_absdiff = mean_of(absdiff, reps);
  est.ratio = est.mean_gap / est.mean_absdiff;
  est.gap_stderr = stderr_of(gap, reps);
  est.absdiff_stderr = stderr_of(absdiff, reps);
  return est;
}

double calibrate_delta0_gauss(std::size_t population, double rho, std::uint64_t reps,
                              std::uint64_t seed, unsigned jobs) {
  return order_gap_mc(ValueDistribution::normal(0.0, 1.0), population, rho, reps, seed, jobs).ratio;
}

double exhaustive_success_prob(const BernoulliParams& params, std::span<const std::uint8_t> x_star) {
  const std::size_t n = params.size();
  if (n > 20) throw CapacityError("exhaustive_success_prob supports n <= 20");
  if (x_star.size() != n) throw DimensionError(n, x_star.size());
  double total = 0.0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double prob = 1.0;
    bool matches = true;
    for (std::size_t i = 0; i < n; ++i) {
      const bool bit = (mask >> i) & 1U;
      prob *= bit ? params[i] : 1.0 - params[i];
      matches = matches && (bit == (x_star[i] != 0));
    }
    if (matches) total += prob;
  }
  return total;
}

}  // namespace cem
