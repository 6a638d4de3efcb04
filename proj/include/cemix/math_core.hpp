#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace cemix {

/// Dense row-major matrix. Small (d <= a few hundred) by construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> init);

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);

/// Lower-triangular factor C with C * C^T equal to the source covariance.
struct CholFactor {
  Matrix lower;

  std::size_t dim() const { return lower.rows(); }
  /// out = C * x
  void apply(std::span<const double> x, std::span<double> out) const;
  /// Solves C * y = b by forward substitution.
  std::vector<double> solve(std::span<const double> b) const;
};

/// Throws NotPositiveDefinite when a pivot is not strictly positive.
CholFactor cholesky(const Matrix& sigma);

/// k-th smallest value (1-based rank). Throws RankOutOfRange.
double order_statistic(std::span<const double> values, std::size_t k);

/// Bisection on a sign-changing bracket; stops once the bracket is narrower than tol.
double bisect_root(const std::function<double(double)>& g, double lo, double hi,
                   double tol = 1e-10);

/// Standard normal distribution function.
double normal_cdf(double z);

/// Neumaier's variant of compensated summation.
class NeumaierSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace cemix
