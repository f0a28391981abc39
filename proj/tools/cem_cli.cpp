// cem: command-line front end for the cross-entropy experiment harness.
//
//   cem run              one row per replicate
//   cem sweep-alpha      hit rate and miss bound per smoothing step
//   cem compare          the three variants at a matched budget
//   cem calibrate-delta0 order-gap Monte Carlo against the scheme constants
//   cem config-dump      effective configuration with defaults filled in
//
// Exit codes: 0 success, 1 runtime error (or a failed replicate), 2 config error.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cem/cem.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_config = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::string out;
  std::string format;
  bool timing = false;
};

// An unreadable config file counts as a config error; failing to write output does not.
int report(cem_status status, bool loading = false) {
  std::cerr << "cem: " << cem_status_name(status) << ": " << cem_last_error() << "\n";
  if (status == CEM_ERR_CONFIG) return exit_config;
  return loading && status == CEM_ERR_IO ? exit_config : exit_runtime;
}

class ConfigHandle {
 public:
  ~ConfigHandle() { cem_config_free(ptr_); }
  cem_config** out() { return &ptr_; }
  cem_config* get() const { return ptr_; }

 private:
  cem_config* ptr_ = nullptr;
};

class TextHandle {
 public:
  ~TextHandle() { cem_text_free(ptr_); }
  cem_text** out() { return &ptr_; }
  cem_text* get() const { return ptr_; }

 private:
  cem_text* ptr_ = nullptr;
};

cem_status load(const Options& opt, ConfigHandle& cfg) {
  cem_status s = opt.config_path.empty() ? cem_config_default(cfg.out())
                                         : cem_config_load(opt.config_path.c_str(), cfg.out());
  if (s != CEM_OK) return s;
  if (opt.seed && (s = cem_config_set_seed(cfg.get(), *opt.seed)) != CEM_OK) return s;
  if (opt.jobs && (s = cem_config_set_jobs(cfg.get(), *opt.jobs)) != CEM_OK) return s;
  if (!opt.format.empty()) {
    const cem_format f = opt.format == "json" ? CEM_FORMAT_JSON : CEM_FORMAT_CSV;
    if ((s = cem_config_set_format(cfg.get(), f)) != CEM_OK) return s;
  }
  if (opt.timing && (s = cem_config_set_timing(cfg.get(), 1)) != CEM_OK) return s;
  return CEM_OK;
}

// --out names the destination only; it is not folded into the config, so
// config-dump prints the file's own output.path.
cem_status emit(const Options& opt, const ConfigHandle& cfg, const TextHandle& text) {
  const std::string path = opt.out.empty() ? std::string(cem_config_output(cfg.get())) : opt.out;
  if (!path.empty()) return cem_text_write(text.get(), path.c_str());
  std::fwrite(cem_text_data(text.get()), 1, cem_text_size(text.get()), stdout);
  std::fflush(stdout);
  return CEM_OK;
}

using Operation = cem_status (*)(const cem_config*, cem_text**, std::size_t*);

int execute(const Options& opt, Operation op) {
  ConfigHandle cfg;
  if (const cem_status s = load(opt, cfg); s != CEM_OK) return report(s, true);
  TextHandle text;
  std::size_t failed = 0;
  if (const cem_status s = op(cfg.get(), text.out(), &failed); s != CEM_OK) return report(s);
  if (const cem_status s = emit(opt, cfg, text); s != CEM_OK) return report(s);
  if (failed > 0) {
    std::cerr << "cem: " << failed << " replicate(s) failed\n";
    return exit_runtime;
  }
  return exit_ok;
}

cem_status op_run(const cem_config* c, cem_text** out, std::size_t* failed) {
  return cem_run_experiment(c, out, failed);
}
cem_status op_sweep(const cem_config* c, cem_text** out, std::size_t*) { return cem_sweep_alpha(c, out); }
cem_status op_compare(const cem_config* c, cem_text** out, std::size_t*) {
  return cem_compare_variants(c, out);
}
cem_status op_calibrate(const cem_config* c, cem_text** out, std::size_t*) {
  return cem_calibrate_delta0(c, out);
}
cem_status op_dump(const cem_config* c, cem_text** out, std::size_t*) { return cem_config_dump(c, out); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-entropy optimization experiments on binary problems"};
  app.set_version_flag("--version", std::string(cem_version()));
  app.require_subcommand(1);

  Options opt;
  const auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "base seed; replicate r uses seed + r");
    sub->add_option("--jobs", opt.jobs, "worker threads (0: all cores)");
    sub->add_option("--out", opt.out, "output file (default: config output.path, else stdout)");
    sub->add_option("--format", opt.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--timing", opt.timing, "add a wall-clock column to run output");
  };

  Operation op = nullptr;
  const auto sub = [&](const char* name, const char* help, Operation fn) {
    CLI::App* s = app.add_subcommand(name, help);
    add_common(s);
    s->callback([&op, fn] { op = fn; });
  };
  sub("run", "run the configured variant for every replicate", op_run);
  sub("sweep-alpha", "hit rate against the smoothing parameter", op_sweep);
  sub("compare", "batch, window and memoryless at a matched budget", op_compare);
  sub("calibrate-delta0", "Monte Carlo order-gap calibration", op_calibrate);
  sub("config-dump", "print the effective configuration", op_dump);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }
  return execute(opt, op);
}
