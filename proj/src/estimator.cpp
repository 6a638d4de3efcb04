#include "cemix/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cemix/errors.hpp"

namespace cemix {

EstimateReport make_report(const SampleMoments& m) {
  EstimateReport r;
  r.n = m.n;
  r.estimate = m.mean;
  r.variance = m.variance();
  r.std_error = std::sqrt(r.variance / static_cast<double>(m.n));
  r.relative_error = r.estimate > 0.0 ? r.std_error / r.estimate : 0.0;
  r.min_lr = m.min_lr;
  r.max_lr = m.max_lr;
  const double total = m.mean * static_cast<double>(m.n);
  r.max_term_share = total > 0.0 ? m.max_term / total : 0.0;
  r.concentration_flag = r.max_term_share > kConcentrationShare;
  return r;
}

EstimateReport is_estimate(const PayoffFn& payoff, const MixtureParam& theta, std::size_t n,
                           const RngStream& stream, Exec exec) {
  if (n < 2) throw std::invalid_argument("estimation needs at least two samples");
  theta.validate();
  return make_report(weighted_moments(payoff, theta, n, stream, exec));
}

EstimateReport is_estimate(const Model& model, const MixtureParam& theta, std::size_t n,
                           const RngStream& stream, Exec exec) {
  if (theta.dim() != model.dim()) throw DimensionMismatch(model.dim(), theta.dim());
  return is_estimate([&model](std::span<const double> x) { return model.payoff(x); }, theta, n,
                     stream, exec);
}

EstimateReport plain_mc_estimate(const PayoffFn& payoff, std::size_t d, std::size_t n,
                                 const RngStream& stream, Exec exec) {
  if (n < 2) throw std::invalid_argument("estimation needs at least two samples");
  return make_report(plain_moments(payoff, d, n, stream, exec));
}

EstimateReport plain_mc_estimate(const Model& model, std::size_t n, const RngStream& stream,
                                 Exec exec) {
  return plain_mc_estimate([&model](std::span<const double> x) { return model.payoff(x); },
                           model.dim(), n, stream, exec);
}

double variance_ratio(const EstimateReport& plain, const EstimateReport& ce) {
  if (plain.n != ce.n) throw UnequalSampleSize("variance ratio needs equal sample sizes");
  if (ce.variance == 0.0) return std::numeric_limits<double>::infinity();
  return plain.variance / ce.variance;
}

}  // namespace cemix
