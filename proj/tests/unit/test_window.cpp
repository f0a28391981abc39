#include <doctest.h>

#include <cmath>

#include "cem/diagnostics.hpp"
#include "cem/errors.hpp"
#include "cem/objectives.hpp"
#include "cem/window.hpp"
#include "support.hpp"

using namespace cem;

namespace {

EvaluatedSample value_sample(double v, std::uint64_t idx) { return {BitVector{0}, v, idx}; }

// Pushes `values` one at a time and returns the decision for the last one.
WindowDecision feed(SampleWindow& w, const std::vector<double>& values, std::uint64_t& idx) {
  WindowDecision d;
  for (double v : values) {
    const EvaluatedSample s = value_sample(v, idx++);
    w.push(s);
    d = window_step(w, s, true);
  }
  return d;
}

OnlineConfig window_config(std::size_t n) {
  OnlineConfig c;
  c.window = 100;
  c.rho = 0.1;
  c.alpha = 0.7;
  c.samples = 5000;
  c.p0 = BernoulliParams::uniform(n);
  return c;
}

}  // namespace

TEST_CASE("online_update examples") {
  const BernoulliParams p({0.2, 0.8});
  const BitVector x{1, 0};
  const BernoulliParams out = online_update(x, p, 0.1);
  CHECK(out[0] == doctest::Approx(0.28).epsilon(1e-12));
  CHECK(out[1] == doctest::Approx(0.72).epsilon(1e-12));

  const BernoulliParams full = online_update(x, p, 1.0);
  CHECK(full[0] == 1.0);
  CHECK(full[1] == 0.0);

  CHECK_THROWS_AS(online_update(BitVector{1}, p, 0.1), DimensionError);
  CHECK_THROWS_AS(online_update(x, p, 0.0), ArgumentError);
}

TEST_CASE("online_update toward a fixed vector shrinks the gap geometrically") {
  const BitVector v{1, 0, 1};
  BernoulliParams p({0.3, 0.6, 0.5});
  const double a1 = 0.07;
  std::vector<double> gap{0.7, 0.6, 0.5};
  for (int step = 0; step < 50; ++step) {
    p = online_update(v, p, a1);
    for (std::size_t i = 0; i < 3; ++i) {
      gap[i] *= 1.0 - a1;
      CHECK(std::abs(p[i] - v[i]) == doctest::Approx(gap[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("window_step examples") {
  SampleWindow w(4, 0.5);
  std::uint64_t idx = 0;
  // 100 is the oldest entry and gets evicted when 7 arrives.
  const WindowDecision d = feed(w, {100, 5, 9, 2, 7}, idx);
  REQUIRE(d.gamma);
  CHECK(*d.gamma == 7.0);
  CHECK(d.is_elite);
  CHECK(w.size() == 4);

  SampleWindow w2(4, 0.5);
  idx = 0;
  const WindowDecision d2 = feed(w2, {100, 5, 9, 2, 1}, idx);
  REQUIRE(d2.gamma);
  CHECK(*d2.gamma == 5.0);
  CHECK_FALSE(d2.is_elite);
}

TEST_CASE("window_step: warm-up makes no decisions") {
  SampleWindow w(5, 0.2);
  std::uint64_t idx = 0;
  for (int i = 0; i < 5; ++i) {
    const EvaluatedSample s = value_sample(100.0 + i, idx++);
    w.push(s);
    const WindowDecision d = window_step(w, s);
    CHECK_FALSE(d.gamma.has_value());
    CHECK_FALSE(d.is_elite);
  }
  const EvaluatedSample s = value_sample(1000.0, idx++);
  w.push(s);
  const WindowDecision d = window_step(w, s);
  CHECK(d.gamma.has_value());
  CHECK(d.is_elite);  // strictly larger than everything in the window
  CHECK(w.size() == 5);
}

TEST_CASE("SampleWindow rejects non-increasing draw indices") {
  SampleWindow w(3, 0.5);
  w.push(value_sample(1.0, 5));
  CHECK_THROWS_AS(w.push(value_sample(2.0, 5)), ArgumentError);
  CHECK_THROWS_AS(w.push(value_sample(2.0, 4)), ArgumentError);
}

TEST_CASE("incremental threshold equals full re-sort on random streams") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RngStream rng(seed);
    const std::size_t cap = 1 + rng.next_u64() % 40;
    const double rho = 0.02 + 0.9 * rng.uniform();
    SampleWindow w(cap, rho);
    for (std::uint64_t t = 0; t < 3000; ++t) {
      // Coarse values force duplicates in the multiset index.
      const EvaluatedSample s = value_sample(std::floor(rng.uniform() * 8.0), t);
      w.push(s);
      const WindowDecision d = window_step(w, s);
      if (d.gamma) REQUIRE(*d.gamma == w.threshold_by_resort());
      CHECK(w.size() <= cap);
      if (t >= cap) CHECK(w.size() == cap);
    }
  }
}

TEST_CASE("run_online_window: K <= N leaves p0 untouched") {
  ProblemSpec s;
  s.kind = ProblemKind::onemax;
  s.n = 8;
  const auto f = make_objective(s);
  OnlineConfig c = window_config(8);
  c.samples = c.window;
  RngStream rng(3);
  const RunTrace t = run_online_window(c, *f, rng);
  CHECK(t.updates == 0);
  CHECK(t.final_params == c.p0);
  for (const auto& r : t.step_log) {
    CHECK(std::isnan(r.gamma));
    CHECK_FALSE(r.elite);
  }
}

TEST_CASE("OnlineConfig step size") {
  const OnlineConfig c = window_config(4);
  CHECK(c.step_size() == doctest::Approx(0.07).epsilon(1e-15));
}

TEST_CASE("run_online_window: elite count within a binomial band") {
  // The band needs an i.i.d. value stream. An optimizing run on a real
  // objective improves over time and admits far more elites.
  const test::CounterNoiseObjective f(40);
  OnlineConfig c = window_config(40);
  c.samples = 20'000;
  c.options.eps_conv = 0.0;
  c.options.record_steps = false;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RngStream rng(seed);
    const RunTrace t = run_online_window(c, f, rng);
    const double m = static_cast<double>(c.samples - c.window);
    const double sd = std::sqrt(m * c.rho * (1 - c.rho));
    CAPTURE(t.elite_samples);
    CHECK(std::abs(static_cast<double>(t.elite_samples) - c.rho * m) <= 3 * sd);
  }
}

TEST_CASE("run_online_window with re-sort checking and envelope") {
  ProblemSpec s;
  s.kind = ProblemKind::onemax;
  s.n = 10;
  const auto f = make_objective(s);
  OnlineConfig c = window_config(10);
  c.check_against_resort = true;
  c.options.snapshot_stride = 1;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RngStream rng(seed);
    const RunTrace t = run_online_window(c, *f, rng);
    CHECK(analyze(t, *f).envelope_violations == 0);
    CHECK(t.best.value == (*f)(t.best.bits));
  }
}

TEST_CASE("frozen window: longest elite-free gap grows slowly") {
  auto longest_gap = [](std::uint64_t length, std::uint64_t seed) {
    SampleWindow w(100, 0.1);
    RngStream rng(seed);
    std::uint64_t gap = 0, worst = 0;
    for (std::uint64_t t = 0; t < length; ++t) {
      const EvaluatedSample s = value_sample(rng.uniform(), t);
      w.push(s);
      const WindowDecision d = window_step(w, s);
      if (!d.gamma) continue;
      gap = d.is_elite ? 0 : gap + 1;
      worst = std::max(worst, gap);
    }
    return worst;
  };
  const auto short_run = longest_gap(10'000, 8);
  const auto long_run = longest_gap(160'000, 8);
  CAPTURE(short_run);
  CAPTURE(long_run);
  // Sixteen times the length; a logarithmic law adds a constant, a linear
  // one would multiply by sixteen.
  CHECK(long_run < 3 * short_run);
  CHECK(long_run < 400);
}
