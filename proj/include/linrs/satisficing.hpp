#pragma once

// Tabular risk-sensitive satisficing (RS) and the optimal aspiration level.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/error.hpp"

namespace linrs {

struct RsTable {
  std::vector<std::uint64_t> counts;  // n_a
  std::vector<double> values;         // running mean reward E_a
  double aleph = 0.0;

  std::size_t arms() const noexcept { return counts.size(); }

  std::uint64_t total() const noexcept {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    return n;
  }

  void record(std::size_t arm, double reward) {
    const auto n = ++counts.at(arm);
    values[arm] += (reward - values[arm]) / static_cast<double>(n);
  }
};

/// (n_a / N) (E_a - aleph)
inline double rs_value(const RsTable& table, std::size_t arm) {
  const auto total = table.total();
  if (total == 0) throw InvalidArgument("rs_value: table has no trials");
  if (arm >= table.arms()) throw InvalidArgument("rs_value: arm out of range");
  return static_cast<double>(table.counts[arm]) / static_cast<double>(total) *
         (table.values[arm] - table.aleph);
}

inline std::vector<double> rs_values(const RsTable& table) {
  std::vector<double> v(table.arms());
  for (std::size_t a = 0; a < v.size(); ++a) v[a] = rs_value(table, a);
  return v;
}

/// Midpoint of the largest and second-largest mean. Input order is irrelevant.
inline double aleph_opt(std::span<const double> means) {
  if (means.size() < 2) throw InvalidArgument("aleph_opt: needs at least two arms");
  std::vector<double> top(means.begin(), means.end());
  std::partial_sort(top.begin(), top.begin() + 2, top.end(), std::greater<>());
  return 0.5 * (top[0] + top[1]);
}

/// Table with every arm tried once.
inline RsTable make_rs_table(std::size_t arms, double aleph, const RewardSampler& sample) {
  if (arms == 0) throw InvalidArgument("make_rs_table: no arms");
  RsTable table{std::vector<std::uint64_t>(arms, 0), std::vector<double>(arms, 0.0), aleph};
  for (std::size_t a = 0; a < arms; ++a) table.record(a, sample(a));
  return table;
}

/// Plays argmax RS_a, observes the reward and updates the table in place.
inline std::size_t rs_policy_step(RsTable& table, const RewardSampler& sample) {
  const auto values = rs_values(table);
  const std::size_t arm = argmax(values);
  table.record(arm, sample(arm));
  return arm;
}

}  // namespace linrs
