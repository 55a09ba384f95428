#pragma once

// Linear risk-sensitive satisficing.
//
// Action value: per-arm ridge estimate theta_a^T x (see ridge.hpp).
// Reliability:  softmax over the k logits phi_a^T x_a, trained online as a
//               multiclass logistic regression whose target mixes the one-hot
//               choice u with the selection-ratio baseline rho = c / t:
//                   y_a = (w u_a + rho_a) / (w + 1)
// Value:        f_a = softmax(phi^T x)_a * (theta_a^T x_a - aleph)

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <span>
#include <string_view>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/numerics.hpp"
#include "linrs/policy/ridge.hpp"

namespace linrs {

struct LinRsConfig {
  double aleph = 0.5;
  double w = 0.1;
  double eta = 0.1;
  std::size_t batch_size = 20;
  std::size_t epochs = 5;
  std::size_t queue_capacity = 100;
  // Apply A/b after every observation instead of every batch_size observations.
  bool immediate_ridge = false;
  InverseMode inverse_mode = InverseMode::kFactorize;
};

/// One decision kept for reliability training.
struct Experience {
  ContextMatrix contexts;
  std::size_t arm = 0;
  std::uint64_t step = 0;
  Vector baseline;  // rho_a = c_a / t when the decision was recorded
};

namespace reliability {

/// y_a = (w [a == chosen] + rho_a) / (w + 1)
inline Vector targets(std::size_t chosen, const Vector& baseline, double w) {
  Vector y = baseline;
  y[static_cast<Eigen::Index>(chosen)] += w;
  return y / (w + 1.0);
}

inline Vector logits(const RowMajorMatrix& phi, const ContextMatrix& contexts) {
  return phi.cwiseProduct(contexts.matrix()).rowwise().sum();
}

inline Vector probabilities(const RowMajorMatrix& phi, const ContextMatrix& contexts) {
  return softmax(logits(phi, contexts));
}

/// Mean cross-entropy -sum_a y_a log n_a over a mini-batch.
inline double loss(const RowMajorMatrix& phi, std::span<const Experience* const> batch,
                   double w) {
  if (batch.empty()) return 0.0;
  double total = 0.0;
  for (const Experience* e : batch) {
    const Vector z = logits(phi, e->contexts);
    const double shift = z.maxCoeff();
    const double log_norm = shift + std::log((z.array() - shift).exp().sum());
    const Vector y = targets(e->arm, e->baseline, w);
    total -= y.dot((z.array() - log_norm).matrix());
  }
  return total / static_cast<double>(batch.size());
}

/// Gradient of loss() with respect to phi: mean of (n_a - y_a) x_a per row.
inline RowMajorMatrix gradient(const RowMajorMatrix& phi,
                               std::span<const Experience* const> batch, double w) {
  RowMajorMatrix grad = RowMajorMatrix::Zero(phi.rows(), phi.cols());
  if (batch.empty()) return grad;
  const Eigen::Index k = phi.rows();
  const double inv_w = 1.0 / (w + 1.0);
  // Runs once per sample per epoch, so it works in place instead of going
  // through probabilities() and targets().
  Vector z(k);
  for (const Experience* e : batch) {
    const RowMajorMatrix& x = e->contexts.matrix();
    z.noalias() = phi.cwiseProduct(x).rowwise().sum();
    if (!z.allFinite()) throw NumericalError("reliability: non-finite logit");
    z = (z.array() - z.maxCoeff()).exp();
    z *= 1.0 / z.sum();
    z -= e->baseline * inv_w;
    z[static_cast<Eigen::Index>(e->arm)] -= w * inv_w;
    grad.noalias() += z.asDiagonal() * x;
  }
  grad /= static_cast<double>(batch.size());
  return grad;
}

}  // namespace reliability

class LinRs final : public Policy {
 public:
  LinRs(std::size_t arms, std::size_t dim, LinRsConfig config = {}, std::uint64_t seed = 0)
      : arms_(arms),
        dim_(dim),
        config_(config),
        ridge_(arms, dim, ridge_batch(config), config.inverse_mode) {
    if (arms_ == 0 || dim_ == 0) throw InvalidArgument("LinRs: needs arms and features");
    if (!std::isfinite(config_.aleph)) throw ConfigError("aleph must be finite");
    if (!(config_.w > 0.0) || !std::isfinite(config_.w)) throw ConfigError("w must be positive");
    if (!(config_.eta > 0.0) || !std::isfinite(config_.eta))
      throw ConfigError("eta must be positive");
    if (config_.batch_size == 0) throw ConfigError("batch_size must be at least 1");
    if (config_.epochs == 0) throw ConfigError("epochs must be at least 1");
    if (config_.queue_capacity == 0) throw ConfigError("queue_capacity must be at least 1");
    reset(seed);
  }

  std::string_view name() const override { return "linrs"; }

  /// f_a for every arm.
  Vector values(const ContextMatrix& contexts) const {
    check(contexts);
    const Vector reliability = reliability::probabilities(phi_, contexts);
    const Vector gap = ridge_.estimates(contexts).array() - config_.aleph;
    return reliability.cwiseProduct(gap);
  }

  std::size_t select(const ContextMatrix& contexts) override { return argmax(values(contexts)); }

  void observe(const ContextMatrix& contexts, std::size_t arm, double reward) override {
    check(contexts);
    if (arm >= arms_) throw InvalidArgument("LinRs: arm out of range");
    ++counts_[arm];
    ++decisions_;

    Vector baseline(static_cast<Eigen::Index>(arms_));
    for (std::size_t a = 0; a < arms_; ++a)
      baseline[static_cast<Eigen::Index>(a)] =
          static_cast<double>(counts_[a]) / static_cast<double>(decisions_);
    queue_.push_back(Experience{contexts, arm, decisions_, std::move(baseline)});
    while (queue_.size() > config_.queue_capacity) queue_.pop_front();

    ridge_.observe(arm, contexts.row(arm), reward);

    if (++since_training_ >= config_.batch_size) {
      train_reliability();
      since_training_ = 0;
    }
  }

  std::size_t greedy_arm(const ContextMatrix& contexts) const override {
    check(contexts);
    return argmax(ridge_.estimates(contexts));
  }

  void reset(std::uint64_t seed) override {
    rng_.seed(seed);
    ridge_ = BatchedRidge(arms_, dim_, ridge_batch(config_), config_.inverse_mode);
    phi_ = RowMajorMatrix::Zero(static_cast<Eigen::Index>(arms_), static_cast<Eigen::Index>(dim_));
    counts_.assign(arms_, 0);
    decisions_ = 0;
    since_training_ = 0;
    queue_.clear();
  }

  /// E epochs over the queue, each in a fresh shuffled order, in chunks of B.
  void train_reliability() {
    std::vector<const Experience*> order;
    order.reserve(queue_.size());
    for (const auto& e : queue_) order.push_back(&e);
    for (std::size_t epoch = 0; epoch < config_.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng_);
      for (std::size_t start = 0; start < order.size(); start += config_.batch_size) {
        const std::size_t len = std::min(config_.batch_size, order.size() - start);
        const std::span<const Experience* const> batch(order.data() + start, len);
        phi_ -= config_.eta * reliability::gradient(phi_, batch, config_.w);
      }
    }
  }

  const LinRsConfig& config() const noexcept { return config_; }
  const BatchedRidge& ridge() const noexcept { return ridge_; }
  const RowMajorMatrix& phi() const noexcept { return phi_; }
  void set_phi(RowMajorMatrix phi) { phi_ = std::move(phi); }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t decisions() const noexcept { return decisions_; }
  const std::deque<Experience>& queue() const noexcept { return queue_; }

 private:
  static std::size_t ridge_batch(const LinRsConfig& c) {
    return c.immediate_ridge ? 1 : c.batch_size;
  }

  void check(const ContextMatrix& contexts) const {
    if (contexts.arms() != arms_ || contexts.dim() != dim_)
      throw InvalidArgument("LinRs: context shape does not match the policy");
  }

  std::size_t arms_;
  std::size_t dim_;
  LinRsConfig config_;
  BatchedRidge ridge_;
  RowMajorMatrix phi_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t decisions_ = 0;
  std::size_t since_training_ = 0;
  std::deque<Experience> queue_;
  Rng rng_;
};

}  // namespace linrs
