#pragma once

#include <cmath>
#include <string_view>

#include "linrs/bandit.hpp"
#include "linrs/policy/ridge.hpp"

namespace linrs {

struct LinUcbConfig {
  double alpha = 0.1;
  std::size_t batch_size = 20;
  InverseMode inverse_mode = InverseMode::kFactorize;
};

/// Disjoint LinUCB: argmax theta_a^T x + alpha sqrt(x^T A_a^{-1} x).
class LinUcb final : public Policy {
 public:
  LinUcb(std::size_t arms, std::size_t dim, LinUcbConfig config = {})
      : arms_(arms), dim_(dim), config_(config),
        ridge_(arms, dim, config.batch_size, config.inverse_mode) {
    if (!(config_.alpha >= 0.0) || !std::isfinite(config_.alpha))
      throw ConfigError("alpha must be finite and non-negative");
  }

  std::string_view name() const override { return "linucb"; }

  Vector scores(const ContextMatrix& contexts) const {
    check(contexts);
    Vector s(static_cast<Eigen::Index>(arms_));
    for (std::size_t a = 0; a < arms_; ++a) {
      const auto x = contexts.row(a);
      const auto& arm = ridge_.arm(a);
      s[static_cast<Eigen::Index>(a)] =
          arm.estimate(x) + config_.alpha * std::sqrt(arm.variance(x));
    }
    return s;
  }

  std::size_t select(const ContextMatrix& contexts) override { return argmax(scores(contexts)); }

  void observe(const ContextMatrix& contexts, std::size_t arm, double reward) override {
    check(contexts);
    ridge_.observe(arm, contexts.row(arm), reward);
  }

  std::size_t greedy_arm(const ContextMatrix& contexts) const override {
    check(contexts);
    return argmax(ridge_.estimates(contexts));
  }

  void reset(std::uint64_t) override {
    ridge_ = BatchedRidge(arms_, dim_, config_.batch_size, config_.inverse_mode);
  }

  const BatchedRidge& ridge() const noexcept { return ridge_; }
  BatchedRidge& ridge() noexcept { return ridge_; }

 private:
  void check(const ContextMatrix& contexts) const {
    if (contexts.arms() != arms_ || contexts.dim() != dim_)
      throw InvalidArgument("LinUcb: context shape does not match the policy");
  }

  std::size_t arms_;
  std::size_t dim_;
  LinUcbConfig config_;
  BatchedRidge ridge_;
};

}  // namespace linrs
