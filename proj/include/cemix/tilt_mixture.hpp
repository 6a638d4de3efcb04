#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cemix/math_core.hpp"
#include "cemix/rng.hpp"

namespace cemix {

/// Mixture of mean-shifted standard Gaussians:
///   h(x) = sum_j weights[j] * phi_d(x - tilts.row(j)).
/// Weights are nonnegative and sum to one; zero weights are tolerated so that
/// raw (unfloored) updates can be represented.
struct MixtureParam {
  std::vector<double> weights;
  Matrix tilts;  // m x d

  MixtureParam() = default;
  MixtureParam(std::vector<double> w, Matrix t);

  /// Equal weights 1/m over the rows of `tilts`.
  static MixtureParam uniform(Matrix tilts);
  /// Single component at `alpha`.
  static MixtureParam single(std::span<const double> alpha);
  /// Single component at the origin, i.e. the nominal density itself.
  static MixtureParam standard(std::size_t d);

  std::size_t components() const { return weights.size(); }
  std::size_t dim() const { return tilts.cols(); }
  std::span<const double> tilt(std::size_t j) const { return tilts.row(j); }

  /// Throws std::invalid_argument if the weights are not a probability vector.
  void validate() const;

  /// Smallest Euclidean distance between two component tilts (inf for m = 1).
  double min_tilt_separation() const;
};

/// log phi_d(x), the standard d-variate normal log density.
double log_std_normal_density(std::span<const double> x);

double log_component_density(std::span<const double> alpha, std::span<const double> x);

double log_mixture_density(const MixtureParam& theta, std::span<const double> x);

/// Component posteriors h(j | x); writes into `out` (size m).
void posterior(const MixtureParam& theta, std::span<const double> x, std::span<double> out);
std::vector<double> posterior(const MixtureParam& theta, std::span<const double> x);

/// f(x) / h(x) with f the standard normal density.
double likelihood_ratio(const MixtureParam& theta, std::span<const double> x);

/// Posterior row and likelihood ratio in one pass; returns the likelihood ratio.
double mixture_terms(const MixtureParam& theta, std::span<const double> x,
                     std::span<double> posterior_out);

/// Draw `index` of a mixture sample: component from the auxiliary uniform,
/// then alpha_J + Z. Returns J.
std::uint32_t draw_mixture(const MixtureParam& theta, const RngStream& stream, std::uint64_t index,
                           std::span<double> out);

SampleBatch sample_mixture(const MixtureParam& theta, std::size_t n, const RngStream& stream);

/// Clamps weights to at least `floor` and rescales the rest so the vector still
/// sums to one. Requires floor * m < 1.
void apply_weight_floor(std::vector<double>& weights, double floor);

}  // namespace cemix
