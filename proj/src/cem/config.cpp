// ExperimentConfig <-> JSON.

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cem/harness.hpp"

namespace cem {

namespace {

using json = nlohmann::json;

// Reads typed fields from one JSON object and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) throw ConfigError(prefix_.empty() ? "<root>" : prefix_, "must be an object");
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

  const json* find(const std::string& key) {
    known_.insert(key);
    const auto it = obj_.find(key);
    if (it == obj_.end() || it->is_null()) return nullptr;
    return &*it;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (const json* v = find(key)) out = convert<T>(*v, path(key));
  }

  template <typename T>
  void read(const std::string& key, std::optional<T>& out) {
    if (const json* v = find(key)) out = convert<T>(*v, path(key));
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!known_.count(key)) throw ConfigError(path(key), "unknown key");
    }
  }

  template <typename T>
  static T convert(const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(where, "must be a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(where, "must be a string");
      return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) throw ConfigError(where, "must be a number");
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw ConfigError(where, "must be finite");
      return d;
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(where, "must be an integer");
      if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
      const auto i = v.get<std::int64_t>();
      if (i < 0) throw ConfigError(where, "must be non-negative");
      return static_cast<T>(i);
    } else {
      static_assert(sizeof(T) == 0, "unsupported config field type");
    }
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::set<std::string> known_;
};

std::vector<double> read_doubles(const json& v, const std::string& where) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(ObjectReader::convert<double>(v, where));
    return out;
  }
  if (!v.is_array()) throw ConfigError(where, "must be a number or an array of numbers");
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(ObjectReader::convert<double>(v[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

void read_problem(const json& v, ProblemSpec& spec) {
  ObjectReader r(v, "problem");
  std::string kind = std::string(to_string(spec.kind));
  r.read("kind", kind);
  spec.kind = parse_problem_kind(kind);
  const bool has_n = r.find("n") != nullptr;
  r.read("n", spec.n);
  r.read("k", spec.k);
  r.read("minimize", spec.minimize);
  if (const json* w = r.find("weights")) spec.weights = read_doubles(*w, "problem.weights");
  if (const json* edges = r.find("edges")) {
    if (!edges->is_array()) throw ConfigError("problem.edges", "must be an array of [u, v] or [u, v, w]");
    spec.edges.clear();
    for (std::size_t i = 0; i < edges->size(); ++i) {
      const std::string where = "problem.edges[" + std::to_string(i) + "]";
      const json& e = (*edges)[i];
      if (!e.is_array() || e.size() < 2 || e.size() > 3) {
        throw ConfigError(where, "must be [u, v] or [u, v, weight]");
      }
      WeightedEdge edge;
      edge.u = ObjectReader::convert<std::size_t>(e[0], where);
      edge.v = ObjectReader::convert<std::size_t>(e[1], where);
      if (e.size() == 3) edge.weight = ObjectReader::convert<double>(e[2], where);
      spec.edges.push_back(edge);
    }
  }
  r.finish();
  // Weighted linear problems may leave n implied by the weights.
  if (spec.kind == ProblemKind::weighted_linear && (!has_n || spec.n == 0)) spec.n = spec.weights.size();
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("<root>", std::string("JSON parse error: ") + e.what());
  }

  ExperimentConfig cfg;
  ObjectReader r(root, "");
  int schema_version = 1;
  r.read("schema_version", schema_version);
  if (schema_version != 1) throw ConfigError("schema_version", "only version 1 is supported");

  if (const json* p = r.find("problem")) read_problem(*p, cfg.problem);
  std::string variant = std::string(to_string(cfg.variant));
  r.read("variant", variant);
  cfg.variant = parse_variant(variant);
  r.read("N", cfg.population);
  r.read("rho", cfg.rho);
  r.read("alpha", cfg.alpha);
  r.read("budget", cfg.budget);
  r.read("T", cfg.generations);
  r.read("K", cfg.samples);
  if (const json* p0 = r.find("p0")) cfg.p0 = read_doubles(*p0, "p0");
  r.read("eps_conv", cfg.eps_conv);
  r.read("convergence_eps", cfg.convergence_eps);
  r.read("snapshot_stride", cfg.snapshot_stride);
  r.read("replicates", cfg.replicates);
  r.read("base_seed", cfg.base_seed);
  r.read("jobs", cfg.jobs);

  if (const json* m = r.find("memoryless")) {
    ObjectReader mr(*m, "memoryless");
    auto& s = cfg.memoryless;
    std::string estimator = std::string(to_string(s.estimator));
    mr.read("estimator", estimator);
    s.estimator = parse_delta_estimator(estimator);
    mr.read("beta", s.beta);
    mr.read("delta", s.delta);
    mr.read("delta0", s.delta0);
    std::string mode = std::string(to_string(s.gauss_mode));
    mr.read("gauss_mode", mode);
    s.gauss_mode = parse_gauss_mode(mode);
    mr.read("gauss_constant", s.gauss_constant);
    mr.read("delta_min", s.delta_min);
    mr.read("gamma0", s.gamma0);
    mr.finish();
  }

  if (const json* o = r.find("output")) {
    ObjectReader orr(*o, "output");
    orr.read("path", cfg.output_path);
    std::string format = std::string(to_string(cfg.format));
    orr.read("format", format);
    try {
      cfg.format = parse_output_format(format);
    } catch (const ConfigError&) {
      throw ConfigError("output.format", "must be csv or json");
    }
    orr.read("timing", cfg.timing);
    orr.finish();
  }

  if (const json* s = r.find("sweep")) {
    ObjectReader sr(*s, "sweep");
    if (const json* a = sr.find("alphas")) cfg.alphas = read_doubles(*a, "sweep.alphas");
    sr.finish();
  }

  if (const json* c = r.find("calibration")) {
    ObjectReader cr(*c, "calibration");
    cr.read("N", cfg.calibration.population);
    cr.read("rho", cfg.calibration.rho);
    cr.read("reps", cfg.calibration.reps);
    cr.finish();
  }

  r.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string dump_config(const ExperimentConfig& cfg) {
  json problem = {
      {"kind", to_string(cfg.problem.kind)},
      {"n", cfg.problem.n},
      {"k", cfg.problem.k},
      {"weights", cfg.problem.weights},
      {"minimize", cfg.problem.minimize},
  };
  json edges = json::array();
  for (const auto& e : cfg.problem.edges) edges.push_back({e.u, e.v, e.weight});
  problem["edges"] = edges;

  const auto& m = cfg.memoryless;
  json root = {
      {"schema_version", 1},
      {"problem", problem},
      {"variant", to_string(cfg.variant)},
      {"N", cfg.population},
      {"rho", cfg.rho},
      {"alpha", cfg.alpha},
      {"budget", cfg.budget},
      {"T", optional_json(cfg.generations)},
      {"K", optional_json(cfg.samples)},
      {"p0", cfg.p0.empty() ? json(0.5) : cfg.p0.size() == 1 ? json(cfg.p0[0]) : json(cfg.p0)},
      {"eps_conv", cfg.eps_conv},
      {"convergence_eps", cfg.convergence_eps},
      {"snapshot_stride", cfg.snapshot_stride},
      {"replicates", cfg.replicates},
      {"base_seed", cfg.base_seed},
      {"jobs", cfg.jobs},
      {"memoryless",
       {{"estimator", to_string(m.estimator)},
        {"beta", m.beta},
        {"delta", m.delta},
        {"delta0", optional_json(m.delta0)},
        {"gauss_mode", to_string(m.gauss_mode)},
        {"gauss_constant", m.gauss_constant},
        {"delta_min", m.delta_min},
        {"gamma0", optional_json(m.gamma0)}}},
      {"output",
       {{"path", cfg.output_path}, {"format", to_string(cfg.format)}, {"timing", cfg.timing}}},
      {"sweep", {{"alphas", cfg.alphas}}},
      {"calibration",
       {{"N", cfg.calibration.population},
        {"rho", cfg.calibration.rho},
        {"reps", cfg.calibration.reps}}},
  };
  return root.dump(2) + "\n";
}

}  // namespace cem
