#include "pseudodp/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "pseudodp/errors.hpp"

namespace pseudodp {

namespace {

using nlohmann::json;

// Strict object reader: typed getters mark keys as consumed, finish()
// rejects whatever is left, reporting the full field path.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  const json* take(const char* key) {
    consumed_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& require(const char* key) {
    const json* v = take(key);
    if (!v) throw ConfigError(field(key) + ": required key is missing");
    return *v;
  }

  std::string string(const char* key) {
    const json& v = require(key);
    if (!v.is_string()) throw ConfigError(field(key) + ": expected a string");
    return v.get<std::string>();
  }

  std::optional<std::string> optional_string(const char* key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_string()) throw ConfigError(field(key) + ": expected a string");
    return v->get<std::string>();
  }

  double number(const char* key) {
    const json& v = require(key);
    if (!v.is_number()) throw ConfigError(field(key) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(const char* key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number()) throw ConfigError(field(key) + ": expected a number");
    return v->get<double>();
  }

  std::optional<bool> optional_bool(const char* key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) throw ConfigError(field(key) + ": expected a boolean");
    return v->get<bool>();
  }

  std::uint64_t unsigned_integer(const char* key) {
    const json& v = require(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw ConfigError(field(key) + ": expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::optional<std::size_t> optional_count(const char* key) {
    const json* v = take(key);
    if (!v) return std::nullopt;
    if (!v->is_number_integer() && !v->is_number_unsigned()) {
      throw ConfigError(field(key) + ": expected an integer");
    }
    if (v->is_number_integer() && v->get<std::int64_t>() < 0) {
      throw ConfigError(field(key) + ": expected a non-negative integer");
    }
    return v->get<std::size_t>();
  }

  std::string field(const char* key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& raw() const { return obj_; }
  const std::string& path() const { return path_; }

  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!consumed_.count(it.key())) {
        throw ConfigError("unknown config key: " + field(it.key().c_str()));
      }
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> consumed_;
};

WeightConfig parse_weights(const json& obj, const std::string& path) {
  ObjectReader reader(obj, path);
  WeightConfig w;
  if (auto c = reader.optional_number("c")) w.c = *c;
  if (auto g = reader.optional_number("g")) w.g = *g;
  if (auto m = reader.optional_number("m_threshold")) w.m_threshold = *m;
  reader.finish();
  w.validate();
  return w;
}

PoissonPrior parse_poisson_prior(const json& obj, const std::string& path) {
  ObjectReader reader(obj, path);
  PoissonPrior prior;
  if (auto a = reader.optional_number("a0")) prior.shape = *a;
  if (auto b = reader.optional_number("b0")) prior.rate = *b;
  reader.finish();
  if (!(prior.shape > 0.0) || !(prior.rate > 0.0)) {
    throw ConfigError(path + ": prior parameters must be positive");
  }
  return prior;
}

MixtureOptions parse_mixture_options(const json& obj, const std::string& path) {
  ObjectReader reader(obj, path);
  MixtureOptions options;
  if (auto k = reader.optional_count("k")) options.n_components = *k;
  if (auto v = reader.optional_number("beta_prior_sd")) options.beta_prior_sd = *v;
  if (auto v = reader.optional_number("sigma_prior_shape")) options.sigma_prior_shape = *v;
  if (auto v = reader.optional_number("sigma_prior_rate")) options.sigma_prior_rate = *v;
  if (auto v = reader.optional_number("dirichlet_total")) options.dirichlet_total = *v;
  reader.finish();
  if (options.n_components == 0) throw ConfigError(path + ".k: must be >= 1");
  if (!(options.beta_prior_sd > 0.0) || !(options.sigma_prior_shape > 0.0) ||
      !(options.sigma_prior_rate > 0.0) || !(options.dirichlet_total > 0.0)) {
    throw ConfigError(path + ": mixture prior parameters must be positive");
  }
  return options;
}

std::vector<StatSpec> parse_stats(const json& arr, const std::string& path,
                                  std::size_t resamples) {
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(path + ": expected a non-empty array of statistics");
  }
  std::vector<StatSpec> stats;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ObjectReader reader(arr[i], path + "[" + std::to_string(i) + "]");
    StatSpec spec;
    const std::string kind = reader.string("kind");
    if (kind == "mean") {
      spec.kind = StatSpec::Kind::Mean;
    } else if (kind == "quantile") {
      spec.kind = StatSpec::Kind::Quantile;
      spec.p = reader.number("p");
    } else {
      throw ConfigError(reader.field("kind") + ": expected 'mean' or 'quantile'");
    }
    spec.resamples = resamples;
    reader.finish();
    spec.validate();
    stats.push_back(spec);
  }
  return stats;
}

std::vector<SweepCell> parse_grid(const json& arr, const std::string& path) {
  if (!arr.is_array() || arr.empty()) throw ConfigError("grid must be non-empty");
  std::vector<SweepCell> grid;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& cell = arr[i];
    const std::string cell_path = path + "[" + std::to_string(i) + "]";
    if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
        !cell[1].is_number()) {
      throw ConfigError(cell_path + ": expected a [c, g] number pair");
    }
    grid.push_back(SweepCell{cell[0].get<double>(), cell[1].get<double>()});
  }
  return grid;
}

StudyConfig parse_study(const json& obj, const std::string& path, std::uint64_t seed,
                        const PoissonPrior& prior) {
  ObjectReader reader(obj, path);
  StudyConfig study;
  study.seed = seed;
  study.prior = prior;

  const json& ns = reader.require("ns");
  if (!ns.is_array() || ns.empty()) {
    throw ConfigError(reader.field("ns") + ": expected a non-empty array of sizes");
  }
  for (const auto& v : ns) {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      throw ConfigError(reader.field("ns") + ": sizes must be integers");
    }
    study.ns.push_back(v.get<std::size_t>());
  }
  if (auto r = reader.optional_count("replicates")) study.replicates = *r;
  if (auto mu = reader.optional_number("mu")) study.mu = *mu;
  if (auto m = reader.optional_number("m_threshold")) study.m_threshold = *m;
  if (auto s = reader.optional_count("s_draws")) study.s_draws = *s;
  if (auto c = reader.optional_number("c")) study.weights.c = *c;
  if (auto g = reader.optional_number("g")) study.weights.g = *g;
  if (auto h = reader.optional_bool("harness_reuse_stage1")) study.harness_reuse_stage1 = *h;
  reader.finish();
  study.validate();
  return study;
}

}  // namespace

RunConfig parse_run_config(const json& root, Command command) {
  ObjectReader reader(root, "");
  RunConfig config;
  config.command = command;

  if (!reader.has("seed")) {
    throw ConfigError("seed: required key is missing (runs must be replayable)");
  }
  config.seed = reader.unsigned_integer("seed");

  if (const json* prior = reader.take("poisson")) {
    config.poisson_prior = parse_poisson_prior(*prior, "poisson");
  }
  if (const json* mixture = reader.take("mixture")) {
    config.mixture_options = parse_mixture_options(*mixture, "mixture");
  }

  if (command == Command::Contraction) {
    config.study = parse_study(reader.require("study"), "study", config.seed,
                               config.poisson_prior);
    reader.finish();
    return config;
  }

  config.model = reader.string("model");
  if (config.model != "poisson" && config.model != "mixture") {
    throw ConfigError("model: expected 'poisson' or 'mixture'");
  }
  config.input = reader.string("input");
  config.response = reader.string("response");
  if (auto s = reader.optional_count("s_draws")) config.s_draws = *s;
  if (auto b = reader.optional_count("burn_in")) config.burn_in = *b;
  if (auto m = reader.optional_count("m_databases")) config.m_databases = *m;
  if (config.s_draws == 0) throw ConfigError("s_draws: must be >= 1");
  if (config.m_databases == 0) throw ConfigError("m_databases: must be >= 1");
  if (config.m_databases > config.s_draws) {
    throw ConfigError("m_databases: cannot exceed s_draws (databases use distinct draws)");
  }
  if (const json* weights = reader.take("weights")) {
    config.weights = parse_weights(*weights, "weights");
  }
  if (auto f = reader.optional_number("safety_factor")) {
    if (!(*f >= 1.0)) throw ConfigError("safety_factor: must be >= 1");
    config.safety_factor = *f;
  }
  if (auto h = reader.optional_bool("harness_reuse_stage1")) {
    config.harness_reuse_stage1 = *h;
  }

  if (command == Command::Synthesize) {
    config.mechanism = mechanism_from_string(reader.string("mechanism"));
    if (config.mechanism == MechanismKind::EmScalar) {
      config.epsilon_target = reader.number("epsilon_target");
      if (!(*config.epsilon_target > 0.0)) {
        throw ConfigError("epsilon_target: must be positive");
      }
      if (auto c = reader.optional_bool("calibrate")) config.calibrate = *c;
    }
    reader.finish();
    return config;
  }

  // sweep
  config.mechanism = MechanismKind::AlphaWeighted;
  if (auto b = reader.optional_count("bootstrap_b")) config.bootstrap_b = *b;
  if (config.bootstrap_b == 0) throw ConfigError("bootstrap_b: must be >= 1");
  config.grid = parse_grid(reader.require("grid"), "grid");
  if (const json* stats = reader.take("stats")) {
    config.stats = parse_stats(*stats, "stats", config.bootstrap_b);
  } else {
    StatSpec mean_spec;
    mean_spec.kind = StatSpec::Kind::Mean;
    mean_spec.resamples = config.bootstrap_b;
    StatSpec q90_spec;
    q90_spec.kind = StatSpec::Kind::Quantile;
    q90_spec.p = 0.9;
    q90_spec.resamples = config.bootstrap_b;
    config.stats = {mean_spec, q90_spec};
  }
  reader.finish();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path, Command command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  return parse_run_config(root, command);
}

nlohmann::json RunConfig::resolved() const {
  json out;
  out["seed"] = seed;
  if (command == Command::Contraction) {
    json study_obj;
    study_obj["ns"] = study.ns;
    study_obj["replicates"] = study.replicates;
    study_obj["mu"] = study.mu;
    study_obj["m_threshold"] = study.m_threshold;
    study_obj["s_draws"] = study.s_draws;
    study_obj["c"] = study.weights.c;
    study_obj["g"] = study.weights.g;
    study_obj["harness_reuse_stage1"] = study.harness_reuse_stage1;
    out["study"] = study_obj;
    out["poisson"] = {{"a0", study.prior.shape}, {"b0", study.prior.rate}};
    return out;
  }

  out["model"] = model;
  out["input"] = input;
  out["response"] = response;
  out["s_draws"] = s_draws;
  out["burn_in"] = burn_in;
  out["m_databases"] = m_databases;
  json weights_obj;
  weights_obj["c"] = weights.c;
  weights_obj["g"] = weights.g;
  if (weights.m_threshold) weights_obj["m_threshold"] = *weights.m_threshold;
  out["weights"] = weights_obj;
  if (safety_factor) out["safety_factor"] = *safety_factor;
  if (harness_reuse_stage1) out["harness_reuse_stage1"] = true;
  if (model == "poisson") {
    out["poisson"] = {{"a0", poisson_prior.shape}, {"b0", poisson_prior.rate}};
  } else {
    out["mixture"] = {{"k", mixture_options.n_components},
                      {"beta_prior_sd", mixture_options.beta_prior_sd},
                      {"sigma_prior_shape", mixture_options.sigma_prior_shape},
                      {"sigma_prior_rate", mixture_options.sigma_prior_rate},
                      {"dirichlet_total", mixture_options.dirichlet_total}};
  }

  if (command == Command::Synthesize) {
    out["mechanism"] = to_string(mechanism);
    if (epsilon_target) out["epsilon_target"] = *epsilon_target;
    if (mechanism == MechanismKind::EmScalar) out["calibrate"] = calibrate;
  } else {
    json grid_arr = json::array();
    for (const auto& cell : grid) grid_arr.push_back({cell.c, cell.g});
    out["grid"] = grid_arr;
    json stats_arr = json::array();
    for (const auto& spec : stats) {
      if (spec.kind == StatSpec::Kind::Mean) {
        stats_arr.push_back({{"kind", "mean"}});
      } else {
        stats_arr.push_back({{"kind", "quantile"}, {"p", spec.p}});
      }
    }
    out["stats"] = stats_arr;
    out["bootstrap_b"] = bootstrap_b;
  }
  return out;
}

PipelineConfig RunConfig::pipeline(int workers) const {
  PipelineConfig p;
  p.s_draws = s_draws;
  p.burn_in = burn_in;
  p.m_databases = m_databases;
  p.seed = seed;
  p.weights = weights;
  if (epsilon_target) p.epsilon_target = *epsilon_target;
  p.calibrate = calibrate;
  p.harness_reuse_stage1 = harness_reuse_stage1;
  p.workers = workers;
  return p;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t hash_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for hashing: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a64(buffer.str());
}

}  // namespace pseudodp
