#pragma once

// Replication runner: forced initial pulls, then the select/observe loop.
// A replication is a pure function of (environment, policy factory,
// settings, index) apart from the measured wall times.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/env/environment.hpp"
#include "linrs/error.hpp"

namespace linrs {

using PolicyFactory = std::function<std::unique_ptr<Policy>(std::size_t arms, std::size_t dim)>;

struct RunSettings {
  std::uint64_t horizon = 1000;
  std::size_t replications = 1;
  std::uint64_t seed = 0;
  std::size_t initial_pulls = 10;
  std::size_t threads = 1;  // 0 = hardware concurrency
  bool keep_logs = false;
};

struct ReplicationSeeds {
  std::uint64_t replication;
  std::uint64_t environment;
  std::uint64_t policy;
  std::uint64_t order;

  static ReplicationSeeds derive(std::uint64_t master, std::size_t index) {
    const std::uint64_t r = derive_seed(master, 0x5265706cULL, index);
    return {r, derive_seed(r, 1, 0), derive_seed(r, 2, 0), derive_seed(r, 3, 0)};
  }
};

struct ReplicationResult {
  std::vector<RoundLog> logs;
  double wall_time_s = 0.0;  // select + observe over the whole replication
  std::uint64_t seed = 0;
  std::string policy;
};

inline std::vector<std::size_t> row_order(const Environment& env, std::uint64_t seed) {
  std::vector<std::size_t> order(env.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (env.shuffle_rows()) {
    Rng rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

inline ReplicationResult run_replication(const Environment& env, const PolicyFactory& make_policy,
                                         const RunSettings& settings, std::size_t index) {
  using Clock = std::chrono::steady_clock;
  const std::size_t k = env.arms();
  const std::uint64_t forced = static_cast<std::uint64_t>(settings.initial_pulls) * k;
  if (settings.horizon == 0) throw ConfigError("horizon must be at least 1");
  if (settings.initial_pulls == 0) throw ConfigError("initial_pulls must be at least 1");
  if (settings.horizon < forced)
    throw ConfigError("horizon " + std::to_string(settings.horizon) +
                      " is smaller than initial_pulls * arms = " + std::to_string(forced));
  if (env.rows() == 0) throw InvalidArgument("environment has no rows");

  const auto seeds = ReplicationSeeds::derive(settings.seed, index);
  const auto order = row_order(env, seeds.order);
  Rng env_rng(seeds.environment);
  auto policy = make_policy(k, env.dim());
  policy->reset(seeds.policy);

  ReplicationResult result;
  result.seed = seeds.replication;
  result.policy = std::string(policy->name());
  result.logs.reserve(settings.horizon);
  double wall = 0.0;
  for (std::uint64_t t = 0; t < settings.horizon; ++t) {
    const EnvironmentRound round = env.round(order[t % order.size()], env_rng);
    const ContextMatrix& ctx = round.contexts;
    RoundLog log;
    log.step = t + 1;
    const std::size_t greedy = policy->greedy_arm(ctx);
    if (t < forced) {
      log.arm = static_cast<std::size_t>(t % k);
    } else {
      const auto start = Clock::now();
      log.arm = policy->select(ctx);
      log.decision_time_s = std::chrono::duration<double>(Clock::now() - start).count();
    }
    log.reward = round.sample_reward(log.arm);
    const auto start = Clock::now();
    policy->observe(ctx, log.arm, log.reward);
    wall += log.decision_time_s + std::chrono::duration<double>(Clock::now() - start).count();
    log.inst_regret = round.regret(log.arm);
    log.greedy = greedy == log.arm ? 1 : 0;
    result.logs.push_back(log);
  }
  result.wall_time_s = wall;
  return result;
}

struct ExperimentCurves {
  std::vector<double> mean_cum_regret;
  std::vector<double> greedy_rate;
};

/// Per-step means over replications of cumulative regret and greedy indicator.
inline ExperimentCurves aggregate(const std::vector<std::vector<RoundLog>>& replications) {
  ExperimentCurves c;
  c.greedy_rate = greedy_rate(replications);
  c.mean_cum_regret.assign(c.greedy_rate.size(), 0.0);
  for (const auto& logs : replications) {
    const auto cum = cumulative_regret(logs);
    for (std::size_t t = 0; t < cum.size(); ++t) c.mean_cum_regret[t] += cum[t];
  }
  for (double& v : c.mean_cum_regret) v /= static_cast<double>(replications.size());
  return c;
}

struct ExperimentResult {
  std::string policy;
  ExperimentCurves curves;
  double mean_wall_time_s = 0.0;
  std::vector<double> final_regrets;
  std::vector<double> wall_times_s;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<RoundLog>> logs;  // filled when keep_logs is set

  double final_regret_mean() const {
    if (final_regrets.empty()) return 0.0;
    return std::accumulate(final_regrets.begin(), final_regrets.end(), 0.0) /
           static_cast<double>(final_regrets.size());
  }

  /// Sample standard deviation (n - 1); 0 for fewer than two replications.
  double final_regret_std() const {
    const std::size_t n = final_regrets.size();
    if (n < 2) return 0.0;
    const double mean = final_regret_mean();
    double ss = 0.0;
    for (double r : final_regrets) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / static_cast<double>(n - 1));
  }

  double final_regret_stderr() const {
    const std::size_t n = final_regrets.size();
    return n == 0 ? 0.0 : final_regret_std() / std::sqrt(static_cast<double>(n));
  }
};

/// Runs every replication (optionally on several threads) and aggregates.
inline ExperimentResult run_experiment(const Environment& env, const PolicyFactory& make_policy,
                                       const RunSettings& settings) {
  if (settings.replications == 0) throw ConfigError("replications must be at least 1");
  const std::size_t r_count = settings.replications;
  std::vector<ReplicationResult> results(r_count);
  std::vector<std::exception_ptr> errors(r_count);

  std::size_t threads = settings.threads == 0 ? std::thread::hardware_concurrency() : settings.threads;
  threads = std::clamp<std::size_t>(threads, 1, r_count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < r_count; i = next++) {
      try {
        results[i] = run_replication(env, make_policy, settings, i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < r_count; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw Error("replication " + std::to_string(i) + " failed: " + e.what(), e.code());
    } catch (const std::exception& e) {
      throw Error("replication " + std::to_string(i) + " failed: " + e.what(), ExitCode::kNumerical);
    }
  }

  ExperimentResult out;
  out.policy = results.front().policy;
  std::vector<std::vector<RoundLog>> logs;
  logs.reserve(r_count);
  for (auto& r : results) {
    out.final_regrets.push_back(cumulative_regret(r.logs).back());
    out.wall_times_s.push_back(r.wall_time_s);
    out.seeds.push_back(r.seed);
    logs.push_back(std::move(r.logs));
  }
  out.curves = aggregate(logs);
  out.mean_wall_time_s = std::accumulate(out.wall_times_s.begin(), out.wall_times_s.end(), 0.0) /
                         static_cast<double>(r_count);
  if (settings.keep_logs) out.logs = std::move(logs);
  return out;
}

struct RuntimeMeasurement {
  double seconds = 0.0;
  double ratio = 0.0;  // target / reference
};

inline RuntimeMeasurement measure_runtime(const ExperimentResult& target,
                                          const ExperimentResult& reference) {
  if (!(reference.mean_wall_time_s > 0.0))
    throw NumericalError("measure_runtime: reference wall time is zero");
  return {target.mean_wall_time_s, target.mean_wall_time_s / reference.mean_wall_time_s};
}

}  // namespace linrs
