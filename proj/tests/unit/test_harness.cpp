#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cem/errors.hpp"
#include "cem/harness.hpp"

using namespace cem;

namespace {

std::string config_field(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return {};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("parse_config reads every section") {
  const ExperimentConfig c = parse_config(R"({
    "schema_version": 1,
    "problem": {"kind": "trap_k", "n": 10, "k": 5},
    "variant": "memoryless",
    "N": 50, "rho": 0.2, "alpha": 0.3, "budget": 1000,
    "p0": 0.4, "replicates": 3, "base_seed": 77, "jobs": 2,
    "memoryless": {"estimator": "gauss", "gauss_mode": "calibrated", "beta": 0.05, "gamma0": 1.5},
    "output": {"format": "json", "path": "out.json"},
    "sweep": {"alphas": [0.5, 0.1]},
    "calibration": {"N": 60, "rho": 0.1, "reps": 20000}
  })");
  CHECK(c.problem.kind == ProblemKind::trap_k);
  CHECK(c.problem.k == 5);
  CHECK(c.variant == Variant::memoryless);
  CHECK(c.population == 50);
  CHECK(c.rho == 0.2);
  CHECK(c.alpha == 0.3);
  CHECK(c.replicates == 3);
  CHECK(c.base_seed == 77);
  CHECK(c.jobs == 2);
  CHECK(c.memoryless.estimator == DeltaEstimator::gauss_model);
  CHECK(c.memoryless.gauss_mode == GaussConstantMode::calibrated);
  CHECK(c.memoryless.gamma0 == 1.5);
  CHECK(c.format == OutputFormat::json);
  CHECK(c.output_path == "out.json");
  CHECK(c.alphas == std::vector<double>{0.5, 0.1});
  CHECK(c.calibration.population == 60);
  CHECK(c.initial_params(10) == BernoulliParams::uniform(10, 0.4));
}

TEST_CASE("config errors name the field") {
  CHECK(config_field(R"({"N": 0})") == "N");
  CHECK(config_field(R"({"rho": 1.5})") == "rho");
  CHECK(config_field(R"({"alpha": 0})") == "alpha");
  CHECK(config_field(R"({"bogus": 1})") == "bogus");
  CHECK(config_field(R"({"problem": {"kind": "onemax", "size": 3}})") == "problem.size");
  CHECK(config_field(R"({"problem": {"kind": "trap_k", "n": 10, "k": 3}})") == "problem.k");
  CHECK(config_field(R"({"variant": "hybrid"})") == "variant");
  CHECK(config_field(R"({"N": "ten"})") == "N");
  CHECK(config_field(R"({"memoryless": {"estimator": "cauchy"}})") == "memoryless.estimator");
  CHECK(config_field(R"({"output": {"format": "xml"}})") == "output.format");
  CHECK(config_field(R"({"variant": "batch", "N": 30, "budget": 1000})") == "budget");
  CHECK(config_field(R"({"p0": [0.5, 0.5]})") == "p0");
  CHECK(config_field("{not json") == "<root>");
  CHECK(config_field(R"({"schema_version": 2})") == "schema_version");
}

TEST_CASE("memoryless with N <= 1/rho is rejected") {
  CHECK(config_field(R"({"variant": "memoryless", "N": 10, "rho": 0.1})") == "N");
  CHECK(config_field(R"({"variant": "memoryless", "N": 5, "rho": 0.1})") == "N");
  CHECK(config_field(R"({"variant": "memoryless", "N": 11, "rho": 0.1})").empty());
}

TEST_CASE("dump_config round-trips") {
  ExperimentConfig c = parse_config(R"({"problem": {"kind": "maxcut", "n": 3, "edges": [[0,1],[1,2,2.5]]},
                                        "variant": "batch", "T": 7, "alpha": 0.25})");
  const std::string dumped = dump_config(c);
  const ExperimentConfig back = parse_config(dumped);
  CHECK(dump_config(back) == dumped);
  CHECK(back.generations == 7);
  CHECK(back.problem.edges.size() == 2);
  CHECK(back.problem.edges[1].weight == 2.5);
  // The dump spells out every default.
  const auto j = nlohmann::json::parse(dumped);
  CHECK(j.contains("memoryless"));
  CHECK(j["memoryless"].contains("delta_min"));
  CHECK(j["eps_conv"] == 1e-6);
}

TEST_CASE("load_config reports missing files as I/O errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/dir/config.json"), IoError);
}

TEST_CASE("run_experiment: one batch replicate conforms to the schema") {
  ExperimentConfig c = parse_config(R"({"problem": {"kind": "onemax", "n": 10}, "variant": "batch",
                                        "N": 50, "T": 20, "replicates": 1})");
  const ExperimentResult res = run_experiment(c);
  REQUIRE(res.rows.size() == 1);
  CHECK(res.failed == 0);
  const ResultRow& r = res.rows[0];
  CHECK(r.seed == c.base_seed);
  if (r.first_hit) CHECK(*r.first_hit < 20u * 50u);
  CHECK(r.envelope_violations == 0);

  const auto csv = lines(results_table(res, false).render(OutputFormat::csv));
  REQUIRE(csv.size() == 3);
  CHECK(csv[0] == "# cem-results v1");
  CHECK(csv[1] ==
        "replicate,seed,variant,steps,updates,first_hit,final_best,converged,converged_step,"
        "sign_changes,envelope_violations,error");
  CHECK(csv[2].rfind("0,1,batch,", 0) == 0);

  const auto json = nlohmann::json::parse(results_table(res, true).render(OutputFormat::json));
  CHECK(json["schema"] == "cem-results");
  CHECK(json["version"] == 1);
  CHECK(json["columns"].back() == "wall_ms");
  CHECK(json["rows"][0]["variant"] == "batch");
}

TEST_CASE("run_experiment: replicate r uses base_seed + r, rows in order") {
  ExperimentConfig c = parse_config(R"({"problem": {"kind": "onemax", "n": 12}, "replicates": 6,
                                        "base_seed": 40, "budget": 3000, "jobs": 3})");
  const ExperimentResult res = run_experiment(c);
  for (std::size_t r = 0; r < res.rows.size(); ++r) {
    CHECK(res.rows[r].replicate == r);
    CHECK(res.rows[r].seed == 40 + r);
  }
  // A single-replicate run at seed 43 reproduces row 3.
  c.replicates = 1;
  c.base_seed = 43;
  const ExperimentResult one = run_experiment(c);
  CHECK(one.rows[0].steps == res.rows[3].steps);
  CHECK(one.rows[0].first_hit == res.rows[3].first_hit);
  CHECK(one.rows[0].sign_changes == res.rows[3].sign_changes);
}

TEST_CASE("run_experiment output is byte-identical across runs and job counts") {
  for (const char* variant : {"batch", "window", "memoryless"}) {
    ExperimentConfig c = parse_config(std::string(R"({"problem": {"kind": "trap_k", "n": 10, "k": 5},
        "budget": 5000, "replicates": 8, "variant": ")") + variant + "\"}");
    c.jobs = 1;
    const std::string a = results_table(run_experiment(c), false).render(OutputFormat::csv);
    c.jobs = 4;
    const std::string b = results_table(run_experiment(c), false).render(OutputFormat::csv);
    CHECK(a == b);
  }
}

TEST_CASE("alpha_sweep") {
  ExperimentConfig c = parse_config(R"({"problem": {"kind": "onemax", "n": 8}, "replicates": 20,
                                        "budget": 2000, "sweep": {"alphas": [0.4]}})");
  const auto rows = alpha_sweep(c);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].alpha == 0.4);
  CHECK(rows[0].replicates == 20);
  CHECK(rows[0].hits <= 20);
  CHECK(rows[0].ci.lo <= rows[0].hit_rate);
  CHECK(rows[0].ci.hi >= rows[0].hit_rate);
  CHECK(rows[0].miss_bound == doctest::Approx(miss_probability_bound(std::ldexp(1.0, -8), 0.04, 8)));

  ExperimentConfig single = c;
  single.alpha = 0.4;
  const ExperimentResult res = run_experiment(single);
  std::size_t hits = 0;
  for (const auto& r : res.rows) hits += r.first_hit ? 1 : 0;
  CHECK(hits == rows[0].hits);

  const auto csv = lines(sweep_table(rows).render(OutputFormat::csv));
  CHECK(csv[0] == "# cem-sweep v1");
  CHECK(csv.size() == 3);
}

TEST_CASE("alpha_sweep needs a known optimum") {
  ExperimentConfig c;
  c.problem.kind = ProblemKind::maxcut;
  c.problem.n = 22;
  for (std::size_t i = 0; i + 1 < 22; ++i) c.problem.edges.push_back({i, i + 1, 1.0});
  CHECK_THROWS_AS(alpha_sweep(c), ConfigError);
}

TEST_CASE("wilson_interval") {
  const BinomialInterval ci = wilson_interval(50, 100);
  CHECK(ci.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(ci.hi == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK(wilson_interval(0, 10).lo == 0.0);
  CHECK(wilson_interval(10, 10).hi == 1.0);
}

TEST_CASE("compare_variants: matched budgets, three rows") {
  ExperimentConfig c = parse_config(R"({"problem": {"kind": "onemax", "n": 20}, "replicates": 30})");
  CHECK(c.evaluations(Variant::batch) == c.evaluations(Variant::window));
  const auto rows = compare_variants(c);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].variant == Variant::batch);
  CHECK(rows[1].variant == Variant::window);
  CHECK(rows[2].variant == Variant::memoryless);
  for (const auto& r : rows) {
    CAPTURE(to_string(r.variant));
    CHECK(r.evaluations == 50'000);
    CHECK(r.hit_rate >= 0.9);
    CHECK(r.failed == 0);
  }
  const auto csv = lines(compare_table(rows).render(OutputFormat::csv));
  CHECK(csv.size() == 5);
}

TEST_CASE("compare_variants: T = 50, N = 100 pairs with K = 5000") {
  ExperimentConfig c = parse_config(R"({"problem": {"kind": "onemax", "n": 6}, "T": 50, "K": 5000,
                                        "replicates": 2})");
  CHECK(c.evaluations(Variant::batch) == 5000);
  CHECK(c.evaluations(Variant::memoryless) == 5000);
  CHECK_NOTHROW(compare_variants(c));
  c.samples = 4000;
  try {
    compare_variants(c);
    FAIL("expected a budget error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "budget");
  }
}

TEST_CASE("calibration table") {
  ExperimentConfig c;
  c.calibration.reps = 20'000;
  const auto csv = lines(calibration_table(c).render(OutputFormat::csv));
  REQUIRE(csv.size() == 4);
  CHECK(csv[0] == "# cem-calibration v1");
  CHECK(csv[2].rfind("uniform,100,0.1,20000,", 0) == 0);
  CHECK(csv[3].rfind("normal,100,0.1,20000,", 0) == 0);
}

TEST_CASE("write_text_file") {
  const std::string path = "harness_write_test.txt";
  write_text_file(path, "abc\n");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  CHECK(s == "abc");
  std::remove(path.c_str());
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/x.csv", "x"), IoError);
}
