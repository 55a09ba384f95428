#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string_view>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/numerics.hpp"

namespace linrs {

struct LinTsConfig {
  double lambda = 0.25;  // prior precision scale
  double a0 = 6.0;
  double b0 = 6.0;
  std::size_t batch_size = 20;
  // Multiplier on the sampled standard deviation. 0 collapses sampling onto
  // the posterior mean.
  double noise_scale = 1.0;
};

/// Posterior of one arm's Bayesian linear regression with unknown noise
/// variance (normal / inverse-gamma conjugate prior).
class LinTsArm {
 public:
  LinTsArm(std::size_t dim, const LinTsConfig& config)
      : precision_(GramMatrix::scaled_identity(static_cast<Eigen::Index>(dim), config.lambda)),
        xr_(Vector::Zero(static_cast<Eigen::Index>(dim))),
        mean_(Vector::Zero(static_cast<Eigen::Index>(dim))),
        a0_(config.a0),
        b0_(config.b0),
        a_(config.a0),
        b_(config.b0) {
    llt_ = factorize(precision_);
  }

  void add(const Eigen::Ref<const Vector>& x, double reward) {
    precision_.add_outer(x);
    xr_.noalias() += reward * x;
    rr_ += reward * reward;
    ++count_;
    dirty_ = true;
  }

  void refresh() {
    if (!dirty_) return;
    llt_ = factorize(precision_);
    mean_ = llt_.solve(xr_);
    a_ = a0_ + 0.5 * static_cast<double>(count_);
    const double quad = mean_.dot(precision_.matrix() * mean_);
    b_ = std::max(b0_ + 0.5 * (rr_ - quad), kScaleFloor);
    dirty_ = false;
  }

  /// theta ~ N(mean, sigma^2 * precision^{-1}), sigma^2 ~ InvGamma(a, b).
  Vector sample(Rng& rng, double noise_scale) const {
    std::gamma_distribution<double> gamma(a_, 1.0 / b_);
    const double sigma2 = 1.0 / gamma(rng);
    std::normal_distribution<double> normal;
    Vector z(mean_.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    // precision = L L^T, so L^{-T} z has covariance precision^{-1}.
    Vector offset = llt_.matrixU().solve(z);
    return mean_ + (noise_scale * std::sqrt(sigma2)) * offset;
  }

  const GramMatrix& precision() const noexcept { return precision_; }
  const Vector& mean() const noexcept { return mean_; }
  double shape() const noexcept { return a_; }
  double scale() const noexcept { return b_; }
  std::uint64_t count() const noexcept { return count_; }

  static constexpr double kScaleFloor = 1e-10;

 private:
  GramMatrix precision_;
  Vector xr_;
  double rr_ = 0.0;
  std::uint64_t count_ = 0;
  Vector mean_;
  double a0_, b0_, a_, b_;
  Eigen::LLT<Matrix> llt_;
  bool dirty_ = false;
};

/// Linear Thompson sampling with disjoint per-arm posteriors.
class LinTs final : public Policy {
 public:
  LinTs(std::size_t arms, std::size_t dim, LinTsConfig config = {}, std::uint64_t seed = 0)
      : arms_(arms), dim_(dim), config_(config), rng_(seed) {
    if (!(config_.lambda > 0.0) || !std::isfinite(config_.lambda))
      throw ConfigError("lambda must be positive");
    if (!(config_.a0 > 0.0) || !std::isfinite(config_.a0)) throw ConfigError("a0 must be positive");
    if (!(config_.b0 > 0.0) || !std::isfinite(config_.b0)) throw ConfigError("b0 must be positive");
    if (config_.batch_size == 0) throw ConfigError("batch_size must be at least 1");
    reset(seed);
  }

  std::string_view name() const override { return "lints"; }

  std::size_t select(const ContextMatrix& contexts) override {
    check(contexts);
    Vector sampled(static_cast<Eigen::Index>(arms_));
    for (std::size_t a = 0; a < arms_; ++a)
      sampled[static_cast<Eigen::Index>(a)] =
          posteriors_[a].sample(rng_, config_.noise_scale).dot(contexts.row(a));
    return argmax(sampled);
  }

  void observe(const ContextMatrix& contexts, std::size_t arm, double reward) override {
    check(contexts);
    if (arm >= arms_) throw InvalidArgument("LinTs: arm out of range");
    if (!std::isfinite(reward)) throw InvalidArgument("LinTs: non-finite reward");
    pending_.push_back({arm, Vector(contexts.row(arm)), reward});
    if (pending_.size() >= config_.batch_size) flush();
  }

  std::size_t greedy_arm(const ContextMatrix& contexts) const override {
    check(contexts);
    Vector v(static_cast<Eigen::Index>(arms_));
    for (std::size_t a = 0; a < arms_; ++a)
      v[static_cast<Eigen::Index>(a)] = posteriors_[a].mean().dot(contexts.row(a));
    return argmax(v);
  }

  void reset(std::uint64_t seed) override {
    rng_.seed(seed);
    pending_.clear();
    posteriors_.clear();
    for (std::size_t a = 0; a < arms_; ++a) posteriors_.emplace_back(dim_, config_);
  }

  void flush() {
    for (const auto& p : pending_) posteriors_.at(p.arm).add(p.x, p.reward);
    pending_.clear();
    for (auto& post : posteriors_) post.refresh();
  }

  const LinTsArm& posterior(std::size_t arm) const { return posteriors_.at(arm); }

 private:
  struct Pending {
    std::size_t arm;
    Vector x;
    double reward;
  };

  void check(const ContextMatrix& contexts) const {
    if (contexts.arms() != arms_ || contexts.dim() != dim_)
      throw InvalidArgument("LinTs: context shape does not match the policy");
  }

  std::size_t arms_;
  std::size_t dim_;
  LinTsConfig config_;
  Rng rng_;
  std::vector<LinTsArm> posteriors_;
  std::vector<Pending> pending_;
};

}  // namespace linrs
