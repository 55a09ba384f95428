#pragma once

// ExperimentConfig: flat JSON schema, defaults per environment, and the glue
// that turns a config into an environment, a policy factory and result files.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "linrs/env/jester.hpp"
#include "linrs/env/mushroom.hpp"
#include "linrs/env/synthetic.hpp"
#include "linrs/error.hpp"
#include "linrs/harness.hpp"
#include "linrs/policy/linrs.hpp"
#include "linrs/policy/lints.hpp"
#include "linrs/policy/linucb.hpp"

namespace linrs {

struct ExperimentConfig {
  std::string environment = "synthetic";  // synthetic | mushroom | jester
  std::string dataset;                     // synthetic dataset file
  std::string mushroom_path;
  std::string jester_path;
  std::vector<std::size_t> jester_feature_columns = JesterColumns::standard().features;
  std::vector<std::size_t> jester_action_columns = JesterColumns::standard().actions;

  std::string policy = "linrs";  // linrs | linucb | lints
  std::optional<double> aleph;   // synthetic default: the dataset's aleph_opt
  std::optional<double> w;
  std::optional<double> eta;
  double alpha = 0.1;
  double lambda = 0.25;
  double a0 = 6.0;
  double b0 = 6.0;
  bool immediate_ridge = false;

  std::optional<std::uint64_t> horizon;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  std::size_t initial_pulls = 10;
  std::size_t batch_size = 20;
  std::size_t epochs = 5;
  std::size_t queue_capacity = 100;
  std::size_t threads = 0;
  std::string output = "results";

  /// Fills environment-dependent defaults. Synthetic aleph needs the dataset
  /// header, so it is passed in once the dataset is loaded.
  void resolve_defaults(std::optional<double> dataset_aleph_opt = std::nullopt) {
    if (environment == "mushroom") {
      if (!aleph) aleph = 4.0;
      if (!w) w = 0.1;
      if (!eta) eta = 0.1;
      if (!horizon) horizon = 8000;
    } else if (environment == "jester") {
      if (!aleph) aleph = 2.0;
      if (!w) w = 0.01;
      if (!eta) eta = 0.01;
      if (!horizon) horizon = 10000;
    } else {
      if (!aleph && dataset_aleph_opt) aleph = *dataset_aleph_opt;
      if (!w) w = 0.1;
      if (!eta) eta = 0.1;
      if (!horizon) horizon = 100000;
    }
  }

  void validate() const {
    auto need = [](bool ok, const char* field, const char* what) {
      if (!ok) throw ConfigError(std::string("invalid ") + field + ": " + what);
    };
    auto finite = [](std::optional<double> v) { return !v || std::isfinite(*v); };
    need(environment == "synthetic" || environment == "mushroom" || environment == "jester",
         "environment", "expected synthetic, mushroom or jester");
    need(policy == "linrs" || policy == "linucb" || policy == "lints", "policy",
         "expected linrs, linucb or lints");
    need(finite(aleph), "aleph", "must be finite");
    need(!w || (*w > 0.0 && std::isfinite(*w)), "w", "must be positive");
    need(!eta || (*eta > 0.0 && std::isfinite(*eta)), "eta", "must be positive");
    need(alpha >= 0.0 && std::isfinite(alpha), "alpha", "must be non-negative");
    need(lambda > 0.0 && std::isfinite(lambda), "lambda", "must be positive");
    need(a0 > 0.0 && std::isfinite(a0), "a0", "must be positive");
    need(b0 > 0.0 && std::isfinite(b0), "b0", "must be positive");
    need(!horizon || *horizon >= 1, "horizon", "must be at least 1");
    need(replications >= 1, "replications", "must be at least 1");
    need(initial_pulls >= 1, "initial_pulls", "must be at least 1");
    need(batch_size >= 1, "batch_size", "must be at least 1");
    need(epochs >= 1, "epochs", "must be at least 1");
    need(queue_capacity >= 1, "queue_capacity", "must be at least 1");
    need(!jester_feature_columns.empty(), "jester_feature_columns", "must be non-empty");
    need(!jester_action_columns.empty(), "jester_action_columns", "must be non-empty");
  }

  RunSettings run_settings() const {
    RunSettings s;
    s.horizon = horizon.value_or(1);
    s.replications = replications;
    s.seed = seed;
    s.initial_pulls = initial_pulls;
    s.threads = threads;
    return s;
  }
};

// ---------------------------------------------------------------------------
// JSON (flat key-value; unknown keys are rejected)
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["environment"] = c.environment;
  j["dataset"] = c.dataset;
  j["mushroom_path"] = c.mushroom_path;
  j["jester_path"] = c.jester_path;
  j["jester_feature_columns"] = c.jester_feature_columns;
  j["jester_action_columns"] = c.jester_action_columns;
  j["policy"] = c.policy;
  j["aleph"] = c.aleph ? nlohmann::json(*c.aleph) : nlohmann::json(nullptr);
  j["w"] = c.w ? nlohmann::json(*c.w) : nlohmann::json(nullptr);
  j["eta"] = c.eta ? nlohmann::json(*c.eta) : nlohmann::json(nullptr);
  j["alpha"] = c.alpha;
  j["lambda"] = c.lambda;
  j["a0"] = c.a0;
  j["b0"] = c.b0;
  j["immediate_ridge"] = c.immediate_ridge;
  j["horizon"] = c.horizon ? nlohmann::json(*c.horizon) : nlohmann::json(nullptr);
  j["replications"] = c.replications;
  j["seed"] = c.seed;
  j["initial_pulls"] = c.initial_pulls;
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["queue_capacity"] = c.queue_capacity;
  j["threads"] = c.threads;
  j["output"] = c.output;
  return j;
}

/// Overlays the keys present in `j` onto `c`.
inline void merge_json(ExperimentConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const auto& v = it.value();
    try {
      auto opt_double = [&]() -> std::optional<double> {
        if (v.is_null()) return std::nullopt;
        return v.get<double>();
      };
      if (key == "environment") c.environment = v.get<std::string>();
      else if (key == "dataset") c.dataset = v.get<std::string>();
      else if (key == "mushroom_path") c.mushroom_path = v.get<std::string>();
      else if (key == "jester_path") c.jester_path = v.get<std::string>();
      else if (key == "jester_feature_columns") c.jester_feature_columns = v.get<std::vector<std::size_t>>();
      else if (key == "jester_action_columns") c.jester_action_columns = v.get<std::vector<std::size_t>>();
      else if (key == "policy") c.policy = v.get<std::string>();
      else if (key == "aleph") c.aleph = opt_double();
      else if (key == "w") c.w = opt_double();
      else if (key == "eta") c.eta = opt_double();
      else if (key == "alpha") c.alpha = v.get<double>();
      else if (key == "lambda") c.lambda = v.get<double>();
      else if (key == "a0") c.a0 = v.get<double>();
      else if (key == "b0") c.b0 = v.get<double>();
      else if (key == "immediate_ridge") c.immediate_ridge = v.get<bool>();
      else if (key == "horizon") c.horizon = v.is_null() ? std::nullopt : std::optional<std::uint64_t>(v.get<std::uint64_t>());
      else if (key == "replications") c.replications = v.get<std::size_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "initial_pulls") c.initial_pulls = v.get<std::size_t>();
      else if (key == "batch_size") c.batch_size = v.get<std::size_t>();
      else if (key == "epochs") c.epochs = v.get<std::size_t>();
      else if (key == "queue_capacity") c.queue_capacity = v.get<std::size_t>();
      else if (key == "threads") c.threads = v.get<std::size_t>();
      else if (key == "output") c.output = v.get<std::string>();
      else throw ConfigError("config: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config: invalid value for '" + key + "': " + e.what());
    }
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("config file not found: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: " + path + " is not valid JSON: " + e.what());
  }
  ExperimentConfig c;
  merge_json(c, j);
  return c;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

/// Loads the environment named by the config. Resolves defaults that depend
/// on the loaded data.
inline std::unique_ptr<Environment> make_environment(ExperimentConfig& c) {
  c.validate();
  std::unique_ptr<Environment> env;
  if (c.environment == "synthetic") {
    if (c.dataset.empty()) throw ConfigError("invalid dataset: synthetic runs need a dataset file");
    auto data = load_dataset(c.dataset);
    const double aleph_opt = data.spec.aleph_opt;
    env = std::make_unique<SyntheticEnvironment>(std::move(data));
    c.resolve_defaults(aleph_opt);
  } else if (c.environment == "mushroom") {
    if (c.mushroom_path.empty()) throw ConfigError("invalid mushroom_path: empty");
    auto data = load_mushroom(c.mushroom_path);
    if (data.rows.empty()) throw DataError("mushroom dataset is empty: " + c.mushroom_path);
    env = std::make_unique<MushroomEnvironment>(std::move(data));
    c.resolve_defaults();
  } else {
    if (c.jester_path.empty()) throw ConfigError("invalid jester_path: empty");
    auto data = load_jester(c.jester_path, {c.jester_feature_columns, c.jester_action_columns});
    if (data.rows.empty()) throw DataError("jester dataset has no complete rows: " + c.jester_path);
    env = std::make_unique<JesterEnvironment>(std::move(data));
    c.resolve_defaults();
  }
  c.validate();
  return env;
}

inline PolicyFactory make_policy_factory(const ExperimentConfig& c) {
  if (c.policy == "linrs") {
    if (!c.aleph) throw ConfigError("invalid aleph: required for linrs");
    LinRsConfig p;
    p.aleph = *c.aleph;
    p.w = c.w.value_or(0.1);
    p.eta = c.eta.value_or(0.1);
    p.batch_size = c.batch_size;
    p.epochs = c.epochs;
    p.queue_capacity = c.queue_capacity;
    p.immediate_ridge = c.immediate_ridge;
    return [p](std::size_t k, std::size_t d) { return std::make_unique<LinRs>(k, d, p); };
  }
  if (c.policy == "linucb") {
    LinUcbConfig p;
    p.alpha = c.alpha;
    p.batch_size = c.batch_size;
    return [p](std::size_t k, std::size_t d) { return std::make_unique<LinUcb>(k, d, p); };
  }
  LinTsConfig p;
  p.lambda = c.lambda;
  p.a0 = c.a0;
  p.b0 = c.b0;
  p.batch_size = c.batch_size;
  return [p](std::size_t k, std::size_t d) { return std::make_unique<LinTs>(k, d, p); };
}

// ---------------------------------------------------------------------------
// Result files
// ---------------------------------------------------------------------------

inline void write_curves_csv(std::ostream& out, const ExperimentResult& r) {
  out << "step,mean_cum_regret,greedy_rate\n";
  const auto old = out.precision(17);
  for (std::size_t t = 0; t < r.curves.mean_cum_regret.size(); ++t)
    out << (t + 1) << ',' << r.curves.mean_cum_regret[t] << ',' << r.curves.greedy_rate[t] << '\n';
  out.precision(old);
}

inline std::string join_seeds(const std::vector<std::uint64_t>& seeds) {
  std::ostringstream s;
  for (std::size_t i = 0; i < seeds.size(); ++i) s << (i ? ";" : "") << seeds[i];
  return s.str();
}

inline void write_summary_header(std::ostream& out, bool with_aleph) {
  if (with_aleph) out << "aleph,";
  out << "policy,mean_runtime_s,final_regret_mean,final_regret_std,seeds\n";
}

inline void write_summary_row(std::ostream& out, const ExperimentResult& r,
                              std::optional<double> aleph = std::nullopt) {
  const auto old = out.precision(17);
  if (aleph) out << *aleph << ',';
  out << r.policy << ',' << r.mean_wall_time_s << ',' << r.final_regret_mean() << ','
      << r.final_regret_std() << ',' << join_seeds(r.seeds) << '\n';
  out.precision(old);
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  return out;
}

/// curves.csv, summary.csv and config.json under config.output.
inline void write_experiment_outputs(const ExperimentConfig& c, const ExperimentResult& r) {
  const std::filesystem::path dir(c.output);
  std::filesystem::create_directories(dir);
  {
    auto out = open_output(dir / "curves.csv");
    write_curves_csv(out, r);
  }
  {
    auto out = open_output(dir / "summary.csv");
    write_summary_header(out, false);
    write_summary_row(out, r);
  }
  {
    auto out = open_output(dir / "config.json");
    out << to_json(c).dump(2) << '\n';
  }
}

/// Loads the environment, runs every replication and returns the result.
/// `c` is updated in place with the resolved defaults.
inline ExperimentResult run_experiment(ExperimentConfig& c) {
  auto env = make_environment(c);
  return run_experiment(*env, make_policy_factory(c), c.run_settings());
}

}  // namespace linrs
