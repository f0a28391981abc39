// Exercises libcem through the public C header only.

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cem/cem.h"

namespace {

struct Config {
  cem_config* ptr = nullptr;
  ~Config() { cem_config_free(ptr); }
};

struct Text {
  cem_text* ptr = nullptr;
  ~Text() { cem_text_free(ptr); }
  std::string str() const { return std::string(cem_text_data(ptr), cem_text_size(ptr)); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(cem_version()) == "1.0.0");
  CHECK(std::string(cem_status_name(CEM_ERR_CONFIG)) == "config error");
}

TEST_CASE("config parse errors surface a status and a message") {
  Config c;
  CHECK(cem_config_parse(R"({"N": 0})", &c.ptr) == CEM_ERR_CONFIG);
  CHECK(c.ptr == nullptr);
  CHECK(std::string(cem_last_error()).rfind("N:", 0) == 0);
  CHECK(cem_config_parse(nullptr, &c.ptr) == CEM_ERR_ARGUMENT);
  CHECK(cem_config_load("/nonexistent/cfg.json", &c.ptr) == CEM_ERR_IO);
}

TEST_CASE("run_experiment through the C API is deterministic") {
  Config c;
  REQUIRE(cem_config_parse(R"({"problem": {"kind": "onemax", "n": 10}, "replicates": 3,
                               "budget": 4000})",
                           &c.ptr) == CEM_OK);
  REQUIRE(cem_config_set_seed(c.ptr, 9) == CEM_OK);
  Text a, b;
  std::size_t failed = 99;
  REQUIRE(cem_run_experiment(c.ptr, &a.ptr, &failed) == CEM_OK);
  CHECK(failed == 0);
  REQUIRE(cem_run_experiment(c.ptr, &b.ptr, nullptr) == CEM_OK);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("# cem-results v1\n", 0) == 0);
  CHECK(a.str().find("\n0,9,window,") != std::string::npos);

  REQUIRE(cem_config_set_format(c.ptr, CEM_FORMAT_JSON) == CEM_OK);
  CHECK(cem_config_format(c.ptr) == CEM_FORMAT_JSON);
  Text j;
  REQUIRE(cem_run_experiment(c.ptr, &j.ptr, nullptr) == CEM_OK);
  CHECK(j.str().find("\"schema\": \"cem-results\"") != std::string::npos);
}

TEST_CASE("objectives") {
  Config c;
  REQUIRE(cem_config_parse(R"({"problem": {"kind": "weighted_linear", "weights": [2, -1, 3]}})", &c.ptr) ==
          CEM_OK);
  cem_objective* f = nullptr;
  REQUIRE(cem_objective_create(c.ptr, &f) == CEM_OK);
  CHECK(cem_objective_dimension(f) == 3);
  const uint8_t ones[3] = {1, 1, 1};
  double v = 0;
  REQUIRE(cem_objective_evaluate(f, ones, 3, &v) == CEM_OK);
  CHECK(v == 4.0);
  CHECK(cem_objective_evaluate(f, ones, 2, &v) == CEM_ERR_DIMENSION);
  uint8_t best[3];
  REQUIRE(cem_objective_optimum(f, best, 3, &v) == CEM_OK);
  CHECK(v == 5.0);
  CHECK(best[0] == 1);
  CHECK(best[1] == 0);
  CHECK(best[2] == 1);
  REQUIRE(cem_objective_enumerate(f, best, 3, &v) == CEM_OK);
  CHECK(v == 5.0);
  cem_objective_free(f);
}

TEST_CASE("single runs and reports") {
  Config c;
  REQUIRE(cem_config_parse(R"({"problem": {"kind": "onemax", "n": 8}, "budget": 3000})", &c.ptr) == CEM_OK);
  cem_run* run = nullptr;
  REQUIRE(cem_run_single(c.ptr, CEM_VARIANT_MEMORYLESS, 5, &run) == CEM_OK);
  CHECK(cem_run_steps(run) > 0);
  CHECK(cem_run_steps(run) <= 3000);
  std::vector<double> p(8);
  REQUIRE(cem_run_final_params(run, p.data(), p.size()) == CEM_OK);
  for (double x : p) CHECK((x >= 0.0 && x <= 1.0));
  CHECK(cem_run_final_params(run, p.data(), 7) == CEM_ERR_DIMENSION);
  Text report;
  REQUIRE(cem_run_report(run, &report.ptr) == CEM_OK);
  CHECK(report.str().find("\"variant\": \"memoryless\"") != std::string::npos);
  CHECK(report.str().find("\"envelope_violations\": 0") != std::string::npos);
  cem_run_free(run);
}

TEST_CASE("closed-form quantities") {
  double v = 0;
  REQUIRE(cem_delta0_uniform(99, &v) == CEM_OK);
  CHECK(v == doctest::Approx(0.03));
  REQUIRE(cem_delta0_gauss(100, 0.1, &v) == CEM_OK);
  CHECK(v == doctest::Approx(0.20987083020331884).epsilon(1e-12));
  CHECK(cem_delta0_gauss(10, 0.1, &v) == CEM_ERR_DOMAIN);
  CHECK(cem_normal_quantile(1.5, &v) == CEM_ERR_DOMAIN);
  CHECK(cem_miss_probability_bound(0.5, 0.0, 10, &v) == CEM_ERR_DOMAIN);
  const double probs[2] = {0.5, 0.5};
  const uint8_t x[2] = {1, 0};
  REQUIRE(cem_phi(probs, x, 2, &v) == CEM_OK);
  CHECK(v == 0.25);
  const double bad[2] = {0.5, 1.5};
  CHECK(cem_phi(bad, x, 2, &v) == CEM_ERR_DOMAIN);
}

TEST_CASE("config dump and writing text") {
  Config c;
  REQUIRE(cem_config_default(&c.ptr) == CEM_OK);
  Text t;
  REQUIRE(cem_config_dump(c.ptr, &t.ptr) == CEM_OK);
  Config back;
  CHECK(cem_config_parse(cem_text_data(t.ptr), &back.ptr) == CEM_OK);
  CHECK(cem_text_write(t.ptr, "/nonexistent/dir/out.json") == CEM_ERR_IO);
  CHECK(std::string(cem_config_output(c.ptr)).empty());
}
