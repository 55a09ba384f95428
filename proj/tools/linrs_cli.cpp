// Command-line front end: gen-data, run, sweep-aleph, report.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linrs/experiment.hpp"

namespace {

using linrs::ExitCode;

struct GenDataFlags {
  linrs::SyntheticSpec spec;
  std::string out;
};

// Flags that override config-file values when given.
struct RunFlags {
  std::string config_path;
  std::optional<std::string> environment, dataset, mushroom, jester, policy, output;
  std::optional<double> aleph, w, eta, alpha, lambda, a0, b0;
  std::optional<std::uint64_t> horizon, seed;
  std::optional<std::size_t> replications, initial_pulls, batch_size, epochs, queue, threads;
  std::optional<std::vector<std::size_t>> jester_features, jester_actions;
  bool immediate_ridge = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "flat JSON experiment config");
    app->add_option("--environment", environment, "synthetic | mushroom | jester");
    app->add_option("--dataset", dataset, "synthetic dataset file (from gen-data)");
    app->add_option("--mushroom", mushroom, "Mushroom data file");
    app->add_option("--jester", jester, "Jester ratings file");
    app->add_option("--jester-features", jester_features, "0-based feature columns")->delimiter(',');
    app->add_option("--jester-actions", jester_actions, "0-based action columns")->delimiter(',');
    app->add_option("--policy", policy, "linrs | linucb | lints");
    app->add_option("--aleph", aleph, "LinRS aspiration level");
    app->add_option("--w", w, "LinRS target weight");
    app->add_option("--eta", eta, "LinRS reliability learning rate");
    app->add_option("--alpha", alpha, "LinUCB exploration coefficient");
    app->add_option("--lambda", lambda, "LinTS prior precision");
    app->add_option("--a0", a0, "LinTS inverse-gamma shape prior");
    app->add_option("--b0", b0, "LinTS inverse-gamma scale prior");
    app->add_option("--horizon", horizon, "steps per replication");
    app->add_option("--replications", replications, "number of replications");
    app->add_option("--seed", seed, "master seed");
    app->add_option("--initial-pulls", initial_pulls, "forced pulls per arm");
    app->add_option("--batch-size", batch_size, "update batch size");
    app->add_option("--epochs", epochs, "reliability epochs per batch");
    app->add_option("--queue", queue, "LinRS experience queue capacity");
    app->add_option("--threads", threads, "replication threads (0 = all cores)");
    app->add_option("--out", output, "output directory");
    app->add_flag("--immediate-ridge", immediate_ridge, "apply ridge updates every step");
  }

  linrs::ExperimentConfig resolve() const {
    linrs::ExperimentConfig c;
    if (!config_path.empty()) c = linrs::load_config(config_path);
    if (environment) c.environment = *environment;
    if (dataset) c.dataset = *dataset;
    if (mushroom) c.mushroom_path = *mushroom;
    if (jester) c.jester_path = *jester;
    if (jester_features) c.jester_feature_columns = *jester_features;
    if (jester_actions) c.jester_action_columns = *jester_actions;
    if (policy) c.policy = *policy;
    if (aleph) c.aleph = *aleph;
    if (w) c.w = *w;
    if (eta) c.eta = *eta;
    if (alpha) c.alpha = *alpha;
    if (lambda) c.lambda = *lambda;
    if (a0) c.a0 = *a0;
    if (b0) c.b0 = *b0;
    if (horizon) c.horizon = *horizon;
    if (seed) c.seed = *seed;
    if (replications) c.replications = *replications;
    if (initial_pulls) c.initial_pulls = *initial_pulls;
    if (batch_size) c.batch_size = *batch_size;
    if (epochs) c.epochs = *epochs;
    if (queue) c.queue_capacity = *queue;
    if (threads) c.threads = *threads;
    if (output) c.output = *output;
    if (immediate_ridge) c.immediate_ridge = true;
    return c;
  }
};

int gen_data(const GenDataFlags& flags) {
  if (flags.out.empty()) throw linrs::ConfigError("invalid --out: output path required");
  if (flags.spec.rows == 0)
    std::cerr << "warning: --n 0 writes a dataset with no rows\n";
  const auto data = linrs::build_filtered_dataset(flags.spec);
  linrs::save_dataset(flags.out, data);
  std::cout << "rows " << data.rows() << "\n"
            << "candidates " << data.candidates << "\n"
            << "acceptance_rate " << std::setprecision(6) << data.acceptance_rate << "\n"
            << "wrote " << flags.out << "\n";
  return 0;
}

void print_result(const linrs::ExperimentConfig& c, const linrs::ExperimentResult& r) {
  std::cout << r.policy << ": final regret " << r.final_regret_mean() << " +- "
            << r.final_regret_std() << " (R=" << r.final_regrets.size() << ", T=" << *c.horizon
            << "), mean runtime " << r.mean_wall_time_s << " s\n";
}

int run(const RunFlags& flags) {
  auto config = flags.resolve();
  auto result = linrs::run_experiment(config);
  linrs::write_experiment_outputs(config, result);
  print_result(config, result);
  std::cout << "wrote " << config.output << "\n";
  return 0;
}

int sweep_aleph(const RunFlags& flags, const std::vector<double>& alephs) {
  if (alephs.empty()) throw linrs::InvalidArgument("sweep-aleph: --alephs must list at least one value");
  auto base = flags.resolve();
  if (base.policy != "linrs") throw linrs::ConfigError("invalid policy: sweep-aleph runs linrs only");
  auto env = linrs::make_environment(base);
  const std::filesystem::path root(base.output);
  std::filesystem::create_directories(root);
  auto summary = linrs::open_output(root / "sweep_summary.csv");
  linrs::write_summary_header(summary, true);
  for (double aleph : alephs) {
    auto c = base;
    c.aleph = aleph;
    c.validate();
    std::ostringstream name;
    name << "aleph_" << aleph;
    c.output = (root / name.str()).string();
    const auto result = linrs::run_experiment(*env, linrs::make_policy_factory(c), c.run_settings());
    linrs::write_experiment_outputs(c, result);
    linrs::write_summary_row(summary, result, aleph);
    std::cout << "aleph " << aleph << " ";
    print_result(c, result);
  }
  std::cout << "wrote " << (root / "sweep_summary.csv").string() << "\n";
  return 0;
}

struct SummaryLine {
  std::string policy;
  double runtime = 0.0, regret_mean = 0.0, regret_std = 0.0;
};

SummaryLine read_summary(const std::filesystem::path& dir) {
  std::ifstream in(dir / "summary.csv");
  if (!in) throw linrs::DataError("summary.csv not found in " + dir.string());
  std::string header, line;
  std::getline(in, header);
  if (!std::getline(in, line)) throw linrs::FormatError("empty summary.csv in " + dir.string());
  std::stringstream ss(line);
  SummaryLine s;
  std::string cell;
  std::getline(ss, s.policy, ',');
  std::getline(ss, cell, ',');
  s.runtime = std::stod(cell);
  std::getline(ss, cell, ',');
  s.regret_mean = std::stod(cell);
  std::getline(ss, cell, ',');
  s.regret_std = std::stod(cell);
  return s;
}

int report(const std::vector<std::string>& dirs, const std::string& reference) {
  std::optional<SummaryLine> ref;
  if (!reference.empty()) ref = read_summary(reference);
  std::cout << std::left << std::setw(32) << "result" << std::setw(10) << "policy" << std::right
            << std::setw(16) << "final_regret" << std::setw(14) << "std" << std::setw(14)
            << "runtime_s";
  if (ref) std::cout << std::setw(10) << "ratio";
  std::cout << "\n";
  for (const auto& d : dirs) {
    const auto s = read_summary(d);
    std::cout << std::left << std::setw(32) << d << std::setw(10) << s.policy << std::right
              << std::setw(16) << s.regret_mean << std::setw(14) << s.regret_std << std::setw(14)
              << s.runtime;
    if (ref) {
      if (!(ref->runtime > 0.0)) throw linrs::NumericalError("report: reference runtime is zero");
      std::cout << std::setw(10) << std::setprecision(4) << s.runtime / ref->runtime
                << std::setprecision(6);
    }
    std::cout << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contextual-bandit benchmark: LinRS, LinUCB, LinTS"};
  app.require_subcommand(1);

  GenDataFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "generate a filtered synthetic dataset");
  gen_cmd->add_option("--d", gen.spec.dim, "feature dimension")->capture_default_str();
  gen_cmd->add_option("--k", gen.spec.arms, "number of arms")->capture_default_str();
  gen_cmd->add_option("--sigma", gen.spec.sigma, "parameter variance")->capture_default_str();
  gen_cmd->add_option("--noise-var", gen.spec.noise_var, "noise variance")->capture_default_str();
  gen_cmd->add_option("--aleph-opt", gen.spec.aleph_opt, "optimal aspiration level")->capture_default_str();
  gen_cmd->add_option("--n", gen.spec.rows, "rows to collect")->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output file")->required();

  RunFlags run_flags;
  auto* run_cmd = app.add_subcommand("run", "run one experiment");
  run_flags.attach(run_cmd);

  RunFlags sweep_flags;
  std::vector<double> alephs;
  auto* sweep_cmd = app.add_subcommand("sweep-aleph", "run LinRS once per aspiration level");
  sweep_flags.attach(sweep_cmd);
  sweep_cmd->add_option("--alephs", alephs, "comma-separated aspiration levels")->delimiter(',');

  std::vector<std::string> report_dirs;
  std::string reference;
  auto* report_cmd = app.add_subcommand("report", "summarize result directories");
  report_cmd->add_option("dirs", report_dirs, "result directories")->required();
  report_cmd->add_option("--reference", reference, "directory whose runtime is the ratio base");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(ExitCode::kUsage);
  }

  try {
    if (*gen_cmd) return gen_data(gen);
    if (*run_cmd) return run(run_flags);
    if (*sweep_cmd) return sweep_aleph(sweep_flags, alephs);
    if (*report_cmd) return report(report_dirs, reference);
  } catch (const linrs::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::kNumerical);
  }
  return static_cast<int>(ExitCode::kUsage);
}
