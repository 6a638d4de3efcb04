#include "cemix/tilt_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cemix/errors.hpp"

namespace cemix {

namespace {

const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = b[i] - a[i];
    s += t * t;
  }
  return s;
}

double squared_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

void check_dim(const MixtureParam& theta, std::span<const double> x) {
  if (x.size() != theta.dim()) throw DimensionMismatch(theta.dim(), x.size());
}

// Fills log(w_j) + log f_{alpha_j}(x) into `terms` and returns log h(x).
double log_terms(const MixtureParam& theta, std::span<const double> x, std::span<double> terms) {
  const std::size_t m = theta.components();
  const double base = -static_cast<double>(x.size()) * kHalfLog2Pi;
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < m; ++j) {
    const double w = theta.weights[j];
    terms[j] = w > 0.0 ? std::log(w) + (-0.5 * squared_distance(theta.tilt(j), x) + base)
                       : -std::numeric_limits<double>::infinity();
    top = std::max(top, terms[j]);
  }
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) s += std::exp(terms[j] - top);
  return top + std::log(s);
}

}  // namespace

MixtureParam::MixtureParam(std::vector<double> w, Matrix t) : weights(std::move(w)), tilts(std::move(t)) {
  if (weights.size() != tilts.rows()) throw DimensionMismatch(tilts.rows(), weights.size());
}

MixtureParam MixtureParam::uniform(Matrix tilts) {
  const std::size_t m = tilts.rows();
  return MixtureParam(std::vector<double>(m, 1.0 / static_cast<double>(m)), std::move(tilts));
}

MixtureParam MixtureParam::single(std::span<const double> alpha) {
  Matrix t(1, alpha.size());
  std::copy(alpha.begin(), alpha.end(), t.row(0).begin());
  return MixtureParam({1.0}, std::move(t));
}

MixtureParam MixtureParam::standard(std::size_t d) { return MixtureParam({1.0}, Matrix(1, d)); }

void MixtureParam::validate() const {
  if (weights.empty()) throw std::invalid_argument("mixture needs at least one component");
  if (weights.size() != tilts.rows()) throw DimensionMismatch(tilts.rows(), weights.size());
  double s = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("mixture weight out of range");
    s += w;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("mixture weights do not sum to one");
  for (double a : tilts.data())
    if (!std::isfinite(a)) throw std::invalid_argument("non-finite tilt");
}

double MixtureParam::min_tilt_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < components(); ++i)
    for (std::size_t j = i + 1; j < components(); ++j)
      best = std::min(best, std::sqrt(squared_distance(tilt(i), tilt(j))));
  return best;
}

double log_std_normal_density(std::span<const double> x) {
  return -0.5 * squared_norm(x) + -static_cast<double>(x.size()) * kHalfLog2Pi;
}

double log_component_density(std::span<const double> alpha, std::span<const double> x) {
  if (alpha.size() != x.size()) throw DimensionMismatch(alpha.size(), x.size());
  return -0.5 * squared_distance(alpha, x) + -static_cast<double>(x.size()) * kHalfLog2Pi;
}

double log_mixture_density(const MixtureParam& theta, std::span<const double> x) {
  check_dim(theta, x);
  std::vector<double> terms(theta.components());
  return log_terms(theta, x, terms);
}

void posterior(const MixtureParam& theta, std::span<const double> x, std::span<double> out) {
  mixture_terms(theta, x, out);
}

std::vector<double> posterior(const MixtureParam& theta, std::span<const double> x) {
  std::vector<double> out(theta.components());
  posterior(theta, x, out);
  return out;
}

double likelihood_ratio(const MixtureParam& theta, std::span<const double> x) {
  return std::exp(log_std_normal_density(x) - log_mixture_density(theta, x));
}

double mixture_terms(const MixtureParam& theta, std::span<const double> x,
                     std::span<double> posterior_out) {
  check_dim(theta, x);
  const double lse = log_terms(theta, x, posterior_out);
  double top = -std::numeric_limits<double>::infinity();
  for (double t : posterior_out) top = std::max(top, t);
  double s = 0.0;
  for (double& t : posterior_out) {
    t = std::exp(t - top);
    s += t;
  }
  for (double& t : posterior_out) t /= s;
  return std::exp(log_std_normal_density(x) - lse);
}

std::uint32_t draw_mixture(const MixtureParam& theta, const RngStream& stream, std::uint64_t index,
                           std::span<double> out) {
  const std::size_t m = theta.components();
  std::uint32_t label = 0;
  if (m > 1) {
    const double u = stream.aux_uniform(index);
    double cum = 0.0;
    label = static_cast<std::uint32_t>(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
      cum += theta.weights[j];
      if (u < cum) {
        label = static_cast<std::uint32_t>(j);
        break;
      }
    }
  }
  stream.normals(index, out);
  const auto alpha = theta.tilt(label);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += alpha[i];
  return label;
}

SampleBatch sample_mixture(const MixtureParam& theta, std::size_t n, const RngStream& stream) {
  SampleBatch batch{Matrix(n, theta.dim()), std::vector<std::uint32_t>(n), stream};
  for (std::size_t k = 0; k < n; ++k) batch.labels[k] = draw_mixture(theta, stream, k, batch.x.row(k));
  return batch;
}

void apply_weight_floor(std::vector<double>& weights, double floor) {
  const std::size_t m = weights.size();
  if (floor <= 0.0 || m == 0) return;
  if (floor * static_cast<double>(m) >= 1.0)
    throw std::invalid_argument("weight floor too large for the component count");
  // Components pinned at the floor; the others share the remaining mass in
  // proportion to their raw values. Pinning can cascade, hence the loop.
  std::vector<bool> pinned(m, false);
  for (;;) {
    double free_mass = 0.0;
    std::size_t n_pinned = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (pinned[j]) ++n_pinned;
      else free_mass += weights[j];
    }
    const double budget = 1.0 - floor * static_cast<double>(n_pinned);
    bool changed = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (pinned[j]) continue;
      if (free_mass <= 0.0 || weights[j] * budget / free_mass < floor) {
        pinned[j] = true;
        changed = true;
      }
    }
    if (!changed) {
      for (std::size_t j = 0; j < m; ++j)
        weights[j] = pinned[j] ? floor : weights[j] * budget / free_mass;
      return;
    }
  }
}

}  // namespace cemix
