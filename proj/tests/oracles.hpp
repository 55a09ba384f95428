#pragma once

// Reference implementations used only by the tests. They avoid Eigen's
// decompositions and work in long double, so they share no code path with
// the library kernels they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<long double>>;
using Column = std::vector<long double>;

/// Gaussian elimination with partial pivoting.
inline Column gaussian_solve(Dense a, Column b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0L) throw std::runtime_error("singular matrix");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  Column x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Inverse by solving against each unit vector.
inline Dense inverse(const Dense& a) {
  const std::size_t n = a.size();
  Dense inv(n, Column(n));
  for (std::size_t j = 0; j < n; ++j) {
    Column e(n, 0.0L);
    e[j] = 1.0L;
    const Column col = gaussian_solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
  }
  return inv;
}

/// scale * I + sum_i x_i x_i^T, accumulated entry by entry.
inline Dense gram(const std::vector<Column>& xs, std::size_t d, long double scale = 1.0L) {
  Dense g(d, Column(d, 0.0L));
  for (std::size_t i = 0; i < d; ++i) g[i][i] = scale;
  for (const auto& x : xs)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) g[i][j] += x[i] * x[j];
  return g;
}

/// Ridge estimate (scale I + X^T X)^{-1} X^T r.
inline Column ridge(const std::vector<Column>& xs, const std::vector<long double>& r,
                    std::size_t d, long double scale = 1.0L) {
  Column xtr(d, 0.0L);
  for (std::size_t n = 0; n < xs.size(); ++n)
    for (std::size_t i = 0; i < d; ++i) xtr[i] += xs[n][i] * r[n];
  return gaussian_solve(gram(xs, d, scale), xtr);
}

inline long double quadratic_form(const Dense& m, const Column& x) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) s += x[i] * m[i][j] * x[j];
  return s;
}

/// exp / sum without max subtraction, in long double.
inline Column softmax(const Column& z) {
  Column e(z.size());
  long double s = 0.0L;
  for (std::size_t i = 0; i < z.size(); ++i) s += (e[i] = std::exp(z[i]));
  for (auto& v : e) v /= s;
  return e;
}

inline long double sigmoid(long double z) { return 1.0L / (1.0L + std::exp(-z)); }

inline std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[best]) best = i;
  return best;
}

/// Ordinary least-squares slope of y against x.
inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
