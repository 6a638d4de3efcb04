#pragma once

#include <cstddef>

#include "cemix/kernels.hpp"
#include "cemix/model.hpp"
#include "cemix/tilt_mixture.hpp"

namespace cemix {

struct EstimateReport {
  double estimate = 0.0;
  double std_error = 0.0;
  double relative_error = 0.0;  // std_error / estimate, 0 when estimate <= 0
  std::size_t n = 0;
  double variance = 0.0;        // per-sample, n - 1 divisor
  double min_lr = 1.0;
  double max_lr = 1.0;
  /// Largest single term as a share of the summed terms.
  double max_term_share = 0.0;
  bool concentration_flag = false;
};

/// A run is flagged when one term carries more than this share of the total.
inline constexpr double kConcentrationShare = 0.1;

EstimateReport make_report(const SampleMoments& m);

/// Mean and standard error of V(X) l_theta(X), X ~ h_theta.
EstimateReport is_estimate(const Model& model, const MixtureParam& theta, std::size_t n,
                           const RngStream& stream, Exec exec = Exec::parallel);
EstimateReport is_estimate(const PayoffFn& payoff, const MixtureParam& theta, std::size_t n,
                           const RngStream& stream, Exec exec = Exec::parallel);

/// Mean and standard error of V(X), X ~ N(0, I_d).
EstimateReport plain_mc_estimate(const Model& model, std::size_t n, const RngStream& stream,
                                 Exec exec = Exec::parallel);
EstimateReport plain_mc_estimate(const PayoffFn& payoff, std::size_t d, std::size_t n,
                                 const RngStream& stream, Exec exec = Exec::parallel);

/// Plain per-sample variance over CE per-sample variance; +inf when the CE
/// variance is zero. Throws UnequalSampleSize.
double variance_ratio(const EstimateReport& plain, const EstimateReport& ce);

}  // namespace cemix
