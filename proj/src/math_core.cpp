#include "cemix/math_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cemix/errors.hpp"

namespace cemix {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> init)
    : rows_(init.size()), cols_(init.size() ? init.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : init) {
    if (r.size() != cols_) throw DimensionMismatch(cols_, r.size());
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch(a.cols(), b.rows());
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

void CholFactor::apply(std::span<const double> x, std::span<double> out) const {
  const std::size_t d = dim();
  if (x.size() != d) throw DimensionMismatch(d, x.size());
  if (out.size() != d) throw DimensionMismatch(d, out.size());
  for (std::size_t i = 0; i < d; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += lower(i, j) * x[j];
    out[i] = s;
  }
}

std::vector<double> CholFactor::solve(std::span<const double> b) const {
  const std::size_t d = dim();
  if (b.size() != d) throw DimensionMismatch(d, b.size());
  std::vector<double> y(d);
  for (std::size_t i = 0; i < d; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= lower(i, j) * y[j];
    y[i] = s / lower(i, i);
  }
  return y;
}

CholFactor cholesky(const Matrix& sigma) {
  const std::size_t d = sigma.rows();
  if (sigma.cols() != d) throw DimensionMismatch(d, sigma.cols());
  Matrix l(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    double pivot = sigma(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) throw NotPositiveDefinite(j);
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < d; ++i) {
      double s = sigma(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return CholFactor{std::move(l)};
}

double order_statistic(std::span<const double> values, std::size_t k) {
  if (k < 1 || k > values.size())
    throw RankOutOfRange("rank " + std::to_string(k) + " outside 1.." +
                         std::to_string(values.size()));
  std::vector<double> tmp(values.begin(), values.end());
  auto nth = tmp.begin() + static_cast<std::ptrdiff_t>(k - 1);
  std::nth_element(tmp.begin(), nth, tmp.end());
  return *nth;
}

double bisect_root(const std::function<double(double)>& g, double lo, double hi, double tol) {
  if (lo > hi) std::swap(lo, hi);
  double glo = g(lo);
  const double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (!(glo * ghi < 0.0))
    throw NoBracket("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at floating-point resolution
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace cemix
