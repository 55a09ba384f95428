#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "linrs/bandit.hpp"
#include "linrs/numerics.hpp"

namespace linrs {

enum class InverseMode {
  kFactorize,        // Cholesky refactorization after each applied batch
  kShermanMorrison,  // explicit inverse kept current with rank-one updates
};

/// Per-arm ridge statistics A = I + sum x x^T, b = sum r x, theta = A^{-1} b.
class RidgeArm {
 public:
  explicit RidgeArm(std::size_t dim, InverseMode mode = InverseMode::kFactorize)
      : a_(GramMatrix::identity(static_cast<Eigen::Index>(dim))),
        b_(Vector::Zero(static_cast<Eigen::Index>(dim))),
        theta_(Vector::Zero(static_cast<Eigen::Index>(dim))),
        mode_(mode) {
    if (mode_ == InverseMode::kShermanMorrison)
      inverse_.emplace(static_cast<Eigen::Index>(dim));
    else
      llt_ = factorize(a_);
  }

  void add(const Eigen::Ref<const Vector>& x, double reward) {
    a_.add_outer(x);
    b_.noalias() += reward * x;
    if (inverse_) inverse_->update(x);
    dirty_ = true;
  }

  /// Recomputes theta (and the factorization) after one or more add() calls.
  void refresh() {
    if (!dirty_) return;
    if (inverse_) {
      theta_ = inverse_->apply(b_);
    } else {
      llt_ = factorize(a_);
      theta_ = llt_.solve(b_);
    }
    if (!theta_.allFinite()) throw NumericalError("RidgeArm: non-finite estimate");
    dirty_ = false;
  }

  double estimate(const Eigen::Ref<const Vector>& x) const { return theta_.dot(x); }

  /// x^T A^{-1} x
  double variance(const Eigen::Ref<const Vector>& x) const {
    if (inverse_) return inverse_->quadratic_form(x);
    return llt_.matrixL().solve(x).squaredNorm();
  }

  const GramMatrix& gram() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  const Vector& theta() const noexcept { return theta_; }

 private:
  GramMatrix a_;
  Vector b_;
  Vector theta_;
  InverseMode mode_;
  Eigen::LLT<Matrix> llt_;
  std::optional<ShermanMorrisonInverse> inverse_;
  bool dirty_ = false;
};

/// Disjoint per-arm ridge models whose reward statistics are applied in
/// batches of `batch_size` observations, in arrival order.
class BatchedRidge {
 public:
  BatchedRidge(std::size_t arms, std::size_t dim, std::size_t batch_size,
               InverseMode mode = InverseMode::kFactorize)
      : batch_size_(batch_size == 0 ? 1 : batch_size) {
    arms_.reserve(arms);
    for (std::size_t a = 0; a < arms; ++a) arms_.emplace_back(dim, mode);
  }

  void observe(std::size_t arm, const Eigen::Ref<const Vector>& x, double reward) {
    if (arm >= arms_.size()) throw InvalidArgument("BatchedRidge: arm out of range");
    if (!std::isfinite(reward)) throw InvalidArgument("BatchedRidge: non-finite reward");
    pending_.push_back({arm, x, reward});
    if (pending_.size() >= batch_size_) flush();
  }

  void flush() {
    for (const auto& p : pending_) arms_.at(p.arm).add(p.x, p.reward);
    pending_.clear();
    for (auto& arm : arms_) arm.refresh();
  }

  std::size_t arms() const noexcept { return arms_.size(); }
  std::size_t pending() const noexcept { return pending_.size(); }
  const RidgeArm& arm(std::size_t a) const { return arms_.at(a); }

  Vector estimates(const ContextMatrix& contexts) const {
    Vector v(static_cast<Eigen::Index>(arms_.size()));
    for (std::size_t a = 0; a < arms_.size(); ++a)
      v[static_cast<Eigen::Index>(a)] = arms_[a].estimate(contexts.row(a));
    return v;
  }

 private:
  struct Pending {
    std::size_t arm;
    Vector x;
    double reward;
  };

  std::size_t batch_size_;
  std::vector<RidgeArm> arms_;
  std::vector<Pending> pending_;
};

}  // namespace linrs
