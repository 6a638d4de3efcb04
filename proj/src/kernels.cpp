#include "cemix/kernels.hpp"

#include <algorithm>

namespace cemix {

namespace {

std::size_t block_count(std::size_t n) { return (n + kBlockSize - 1) / kBlockSize; }

// Per-sample term of the estimator. `theta == nullptr` means sampling from the
// nominal density (likelihood ratio 1).
template <bool Weighted>
void accumulate_range(const PayoffFn& payoff, const MixtureParam* theta, std::size_t d,
                      const RngStream& stream, std::size_t begin, std::size_t end,
                      SampleMoments& acc) {
  std::vector<double> x(d);
  std::vector<double> post(Weighted ? theta->components() : 0);
  for (std::size_t k = begin; k < end; ++k) {
    if constexpr (Weighted) {
      draw_mixture(*theta, stream, k, x);
      const double v = payoff(x);
      const double lr = mixture_terms(*theta, x, post);
      acc.add(v * lr, lr);
    } else {
      stream.normals(k, x);
      acc.add(payoff(x), 1.0);
    }
  }
}

template <bool Weighted>
SampleMoments moments(const PayoffFn& payoff, const MixtureParam* theta, std::size_t d,
                      std::size_t n, const RngStream& stream, Exec exec) {
  if (exec == Exec::reference) {
    SampleMoments acc;
    accumulate_range<Weighted>(payoff, theta, d, stream, 0, n, acc);
    return acc;
  }
  const std::size_t nb = block_count(n);
  std::vector<SampleMoments> partial(nb);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kBlockSize;
    accumulate_range<Weighted>(payoff, theta, d, stream, begin, std::min(n, begin + kBlockSize),
                               partial[static_cast<std::size_t>(b)]);
  }
  SampleMoments total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

}  // namespace

std::size_t PilotEvaluation::positive_count() const {
  return static_cast<std::size_t>(
      std::count_if(payoff.begin(), payoff.end(), [](double v) { return v > 0.0; }));
}

void for_each_index(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn) {
  if (exec == Exec::reference) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) fn(static_cast<std::size_t>(i));
}

SampleBatch draw_batch(const MixtureParam& theta, std::size_t n, const RngStream& stream, Exec exec) {
  SampleBatch batch{Matrix(n, theta.dim()), std::vector<std::uint32_t>(n), stream};
  for_each_index(n, exec, [&](std::size_t k) {
    batch.labels[k] = draw_mixture(theta, stream, k, batch.x.row(k));
  });
  return batch;
}

PilotEvaluation evaluate_batch(const PayoffFn& payoff, const MixtureParam& theta, SampleBatch batch,
                               Exec exec) {
  const std::size_t n = batch.size();
  PilotEvaluation eval{std::move(batch), std::vector<double>(n), std::vector<double>(n),
                       Matrix(n, theta.components())};
  for_each_index(n, exec, [&](std::size_t k) {
    const auto x = eval.samples.x.row(k);
    eval.payoff[k] = payoff(x);
    eval.lr[k] = mixture_terms(theta, x, eval.posteriors.row(k));
  });
  return eval;
}

PilotEvaluation evaluate_pilot(const PayoffFn& payoff, const MixtureParam& theta, std::size_t n,
                               const RngStream& stream, Exec exec) {
  return evaluate_batch(payoff, theta, draw_batch(theta, n, stream, exec), exec);
}

void SampleMoments::add(double term, double lr) {
  ++n;
  const double delta = term - mean;
  mean += delta / static_cast<double>(n);
  m2 += delta * (term - mean);
  min_lr = std::min(min_lr, lr);
  max_lr = std::max(max_lr, lr);
  max_term = std::max(max_term, term);
}

void SampleMoments::merge(const SampleMoments& o) {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(o.n);
  const double total = na + nb;
  const double delta = o.mean - mean;
  mean += delta * nb / total;
  m2 += o.m2 + delta * delta * na * nb / total;
  n += o.n;
  min_lr = std::min(min_lr, o.min_lr);
  max_lr = std::max(max_lr, o.max_lr);
  max_term = std::max(max_term, o.max_term);
}

double SampleMoments::variance() const {
  return n > 1 ? std::max(0.0, m2) / static_cast<double>(n - 1) : 0.0;
}

SampleMoments weighted_moments(const PayoffFn& payoff, const MixtureParam& theta, std::size_t n,
                               const RngStream& stream, Exec exec) {
  return moments<true>(payoff, &theta, theta.dim(), n, stream, exec);
}

SampleMoments plain_moments(const PayoffFn& payoff, std::size_t d, std::size_t n,
                            const RngStream& stream, Exec exec) {
  return moments<false>(payoff, nullptr, d, n, stream, exec);
}

}  // namespace cemix
