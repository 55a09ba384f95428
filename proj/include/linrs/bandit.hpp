#pragma once

// Per-round contract shared by environments, policies and the harness.

#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linrs/error.hpp"
#include "linrs/numerics.hpp"

namespace linrs {

using Rng = std::mt19937_64;
using RowMajorMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  return mix_seed(mix_seed(mix_seed(master) ^ stream) ^ index);
}

/// Index of the largest value; ties go to the lowest index.
inline std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("argmax: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

inline std::size_t argmax(const Vector& values) {
  return argmax(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())));
}

/// One feature vector per arm, stored row-wise (k x d).
class ContextMatrix {
 public:
  ContextMatrix() = default;

  explicit ContextMatrix(RowMajorMatrix rows) : rows_(std::move(rows)) {
    if (rows_.rows() == 0 || rows_.cols() == 0)
      throw InvalidArgument("ContextMatrix: needs at least one arm and one feature");
    if (!rows_.allFinite()) throw InvalidArgument("ContextMatrix: non-finite feature");
  }

  /// Same feature vector for every arm (datasets without per-arm features).
  static ContextMatrix shared(const Eigen::Ref<const Vector>& x, std::size_t arms) {
    RowMajorMatrix rows(static_cast<Eigen::Index>(arms), x.size());
    rows.rowwise() = x.transpose();
    return ContextMatrix(std::move(rows));
  }

  std::size_t arms() const noexcept { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(rows_.cols()); }

  auto row(std::size_t arm) const {
    return rows_.row(static_cast<Eigen::Index>(arm)).transpose();
  }

  const RowMajorMatrix& matrix() const noexcept { return rows_; }

 private:
  RowMajorMatrix rows_;
};

using RewardSampler = std::function<double(std::size_t)>;

struct EnvironmentRound {
  ContextMatrix contexts;
  std::vector<double> true_means;
  RewardSampler sample_reward;

  std::size_t arms() const noexcept { return true_means.size(); }
  std::size_t optimal_arm() const { return argmax(true_means); }
  double regret(std::size_t arm) const {
    return true_means[optimal_arm()] - true_means.at(arm);
  }
};

struct RoundLog {
  std::uint64_t step = 0;
  std::size_t arm = 0;
  double reward = 0.0;
  double inst_regret = 0.0;
  int greedy = 0;
  double decision_time_s = 0.0;
};

/// Behavioral interface every contextual policy implements.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t select(const ContextMatrix& contexts) = 0;
  virtual void observe(const ContextMatrix& contexts, std::size_t arm, double reward) = 0;
  /// argmax of the estimated action value, lowest index on ties.
  virtual std::size_t greedy_arm(const ContextMatrix& contexts) const = 0;
  virtual void reset(std::uint64_t seed) = 0;
};

inline std::vector<double> cumulative_regret(std::span<const RoundLog> logs) {
  std::vector<double> out;
  out.reserve(logs.size());
  double total = 0.0;
  for (const auto& log : logs) {
    total += log.inst_regret;
    out.push_back(total);
  }
  return out;
}

/// Per-step mean of greedy indicators across replications.
inline std::vector<double> greedy_rate(const std::vector<std::vector<RoundLog>>& replications) {
  if (replications.empty()) return {};
  const std::size_t horizon = replications.front().size();
  std::vector<double> rate(horizon, 0.0);
  for (const auto& logs : replications) {
    if (logs.size() != horizon)
      throw InvalidArgument("greedy_rate: replications have different horizons");
    for (std::size_t t = 0; t < horizon; ++t) rate[t] += logs[t].greedy;
  }
  for (double& r : rate) r /= static_cast<double>(replications.size());
  return rate;
}

inline void write_round_log_csv(std::ostream& out, std::span<const RoundLog> logs) {
  out << "step,arm,reward,inst_regret,cum_regret,greedy,decision_time_s\n";
  const auto cum = cumulative_regret(logs);
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < logs.size(); ++i) {
    const auto& l = logs[i];
    out << l.step << ',' << l.arm << ',' << l.reward << ',' << l.inst_regret << ','
        << cum[i] << ',' << l.greedy << ',' << l.decision_time_s << '\n';
  }
  out.precision(old_precision);
}

}  // namespace linrs
