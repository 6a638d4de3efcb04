#pragma once

// Data-parallel kernels shared by the CE engine, the initializers and the
// estimator. Each kernel has two paths:
//
//   Exec::reference  plain serial loops, kept as the correctness baseline;
//   Exec::parallel   OpenMP over fixed-size blocks.
//
// Per-sample work depends only on the stream coordinates and the sample index,
// and block partials are merged in block order, so the parallel path gives the
// same bits for any thread count.

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "cemix/math_core.hpp"
#include "cemix/rng.hpp"
#include "cemix/tilt_mixture.hpp"

namespace cemix {

enum class Exec { reference, parallel };

using PayoffFn = std::function<double(std::span<const double>)>;

/// Samples drawn from h_theta together with V(X_k), l_theta(X_k) and h_theta(j | X_k).
struct PilotEvaluation {
  SampleBatch samples;
  std::vector<double> payoff;
  std::vector<double> lr;
  Matrix posteriors;  // N x m

  std::size_t size() const { return payoff.size(); }
  std::size_t components() const { return posteriors.cols(); }
  std::size_t positive_count() const;
};

/// Number of samples per block in the parallel reductions.
inline constexpr std::size_t kBlockSize = 2048;

/// Calls fn(i) for i in [0, n).
void for_each_index(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn);

SampleBatch draw_batch(const MixtureParam& theta, std::size_t n, const RngStream& stream,
                       Exec exec = Exec::parallel);

/// Payoff, likelihood ratio and posterior row for every sample of `batch`.
PilotEvaluation evaluate_batch(const PayoffFn& payoff, const MixtureParam& theta, SampleBatch batch,
                               Exec exec = Exec::parallel);

PilotEvaluation evaluate_pilot(const PayoffFn& payoff, const MixtureParam& theta, std::size_t n,
                               const RngStream& stream, Exec exec = Exec::parallel);

/// Streaming mean / variance of the per-sample estimator terms (Welford, with
/// Chan's pairwise merge) plus likelihood-ratio diagnostics.
struct SampleMoments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min_lr = std::numeric_limits<double>::infinity();
  double max_lr = -std::numeric_limits<double>::infinity();
  double max_term = 0.0;

  void add(double term, double lr);
  void merge(const SampleMoments& other);
  /// Unbiased (n - 1) sample variance.
  double variance() const;
};

/// Moments of V(X) l_theta(X), X ~ h_theta.
SampleMoments weighted_moments(const PayoffFn& payoff, const MixtureParam& theta, std::size_t n,
                               const RngStream& stream, Exec exec = Exec::parallel);

/// Moments of V(X), X ~ N(0, I_d).
SampleMoments plain_moments(const PayoffFn& payoff, std::size_t d, std::size_t n,
                            const RngStream& stream, Exec exec = Exec::parallel);

}  // namespace cemix
