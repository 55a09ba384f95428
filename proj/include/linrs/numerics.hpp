#pragma once

// Dense kernels shared by every policy. All arithmetic is double precision.

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "linrs/error.hpp"

namespace linrs {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Regularized Gram matrix `I + sum x x^T`. The stored matrix is exactly
/// symmetric: every update adds `x_i x_j` to both mirrored entries, and the
/// product is commutative in IEEE arithmetic.
class GramMatrix {
 public:
  GramMatrix() = default;

  static GramMatrix identity(Eigen::Index dim) {
    if (dim <= 0) throw InvalidArgument("GramMatrix: dimension must be positive");
    return GramMatrix(Matrix::Identity(dim, dim), Unchecked{});
  }

  static GramMatrix scaled_identity(Eigen::Index dim, double scale) {
    if (dim <= 0) throw InvalidArgument("GramMatrix: dimension must be positive");
    if (!(scale > 0.0) || !std::isfinite(scale))
      throw InvalidArgument("GramMatrix: scale must be positive and finite");
    return GramMatrix(scale * Matrix::Identity(dim, dim), Unchecked{});
  }

  /// Adopts an arbitrary square matrix; rejects it unless symmetric to 1e-12.
  explicit GramMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
      throw InvalidArgument("GramMatrix: matrix must be square and non-empty");
    if (!entries_.allFinite()) throw NumericalError("GramMatrix: non-finite entry");
    if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw InvalidArgument("GramMatrix: matrix is not symmetric");
  }

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }

  void add_outer(const Eigen::Ref<const Vector>& x) {
    if (x.size() != dim())
      throw InvalidArgument("rank_one_update: dimension mismatch (" +
                            std::to_string(dim()) + " vs " +
                            std::to_string(x.size()) + ")");
    entries_.noalias() += x * x.transpose();
  }

 private:
  struct Unchecked {};
  GramMatrix(Matrix entries, Unchecked) : entries_(std::move(entries)) {}

  Matrix entries_;
};

/// Returns `A + x x^T`.
inline GramMatrix rank_one_update(GramMatrix a, const Eigen::Ref<const Vector>& x) {
  a.add_outer(x);
  return a;
}

/// Cholesky factor of a Gram matrix. Throws NumericalError when the matrix is
/// not positive definite to working precision.
inline Eigen::LLT<Matrix> factorize(const GramMatrix& a) {
  if (!a.matrix().allFinite()) throw NumericalError("factorize: non-finite matrix");
  Eigen::LLT<Matrix> llt(a.matrix());
  if (llt.info() != Eigen::Success)
    throw NumericalError("factorize: matrix is not positive definite");
  return llt;
}

/// Solves `A theta = b` through a Cholesky factorization.
inline Vector solve(const GramMatrix& a, const Eigen::Ref<const Vector>& b) {
  if (b.size() != a.dim()) throw InvalidArgument("solve: dimension mismatch");
  if (!b.allFinite()) throw NumericalError("solve: non-finite right-hand side");
  Vector theta = factorize(a).solve(b);
  if (!theta.allFinite()) throw NumericalError("solve: non-finite solution");
  return theta;
}

/// Max-subtracted softmax.
inline Vector softmax(const Eigen::Ref<const Vector>& logits) {
  if (logits.size() == 0) throw InvalidArgument("softmax: empty input");
  if (!logits.allFinite()) throw NumericalError("softmax: non-finite logit");
  const double shift = logits.maxCoeff();
  Vector out = (logits.array() - shift).exp();
  out /= out.sum();
  return out;
}

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// Explicit inverse of a Gram matrix maintained with the Sherman-Morrison
/// identity. Drifts slowly under long update chains; callers that need the
/// exact value should refactorize.
class ShermanMorrisonInverse {
 public:
  explicit ShermanMorrisonInverse(Eigen::Index dim, double scale = 1.0)
      : inverse_(Matrix::Identity(dim, dim) / scale) {}

  void update(const Eigen::Ref<const Vector>& x) {
    if (x.size() != inverse_.rows())
      throw InvalidArgument("ShermanMorrisonInverse: dimension mismatch");
    const Vector ax = inverse_ * x;
    const double denom = 1.0 + x.dot(ax);
    inverse_.noalias() -= (ax * ax.transpose()) / denom;
  }

  const Matrix& inverse() const noexcept { return inverse_; }
  Vector apply(const Eigen::Ref<const Vector>& b) const { return inverse_ * b; }
  double quadratic_form(const Eigen::Ref<const Vector>& x) const {
    return x.dot(inverse_ * x);
  }

 private:
  Matrix inverse_;
};

}  // namespace linrs
